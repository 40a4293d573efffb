import pytest
import sympy

from higherhom.linalg import Matrix
from higherhom.modules import (
    Module,
    direct_sum,
    dualize,
    ext_dim,
    hom_basis,
    hom_dim,
    identity_map,
    is_injective,
    is_projective,
    map_cokernel,
    map_kernel,
    projective_cover,
    projective_resolution,
    std_injective,
    std_projective,
    tau,
    tau_inverse,
    validate_module,
    zero_module,
)
from higherhom.quiver import opposite_algebra
from support import fixture


def mods(p):
    return p.modules


def test_validate_module(n3):
    m = mods(n3)
    assert validate_module(m["S2"]).ok and validate_module(m["[1,2]"]).ok
    bad = Module(n3.algebra, [1, 1, 1], [Matrix.identity(1), Matrix.identity(1)], "[1,3]")
    diag = validate_module(bad)
    assert not diag.ok and "a.b" in " ".join(diag)


def test_hom_examples(a2, n3):
    m = mods(a2)
    assert hom_dim(m["P12"], m["S1"]) == 1
    assert hom_dim(m["S1"], m["S2"]) == 0
    m = mods(n3)
    assert hom_dim(m["[2,3]"], m["[1,2]"]) == 1
    (f,) = hom_basis(m["[2,3]"], m["[1,2]"])
    assert f.ranks() == (0, 1, 0)  # factors through S2
    with pytest.raises(ValueError):
        hom_basis(m["S1"], mods(a2)["S1"])


def test_standard_modules(n3):
    m, alg = mods(n3), n3.algebra
    assert std_projective(alg, 2) == m["S3"]
    assert std_projective(alg, 0) == m["[1,2]"]
    assert std_injective(alg, 0).dims == (1, 0, 0)
    assert std_injective(alg, 1).dims == (1, 1, 0) and std_injective(alg, 2).dims == (0, 1, 1)
    assert is_projective(m["[2,3]"]) and not is_projective(m["S1"])
    assert is_injective(m["S1"]) and not is_injective(m["S3"])


def test_dualize(n3):
    m, alg = mods(n3), n3.algebra
    op = opposite_algebra(alg)
    d = dualize(m["S2"])
    assert d.algebra == op and d.dims == (0, 1, 0)
    d = dualize(m["[1,2]"])
    assert d.dims == (1, 1, 0) and validate_module(d).ok
    assert std_projective(op, 1) == dualize(std_injective(alg, 1))
    dd = dualize(d)
    assert dd.algebra == alg and any(f.is_isomorphism() for f in hom_basis(dd, m["[1,2]"]))


def test_projective_cover(n3):
    m = mods(n3)
    p, f = projective_cover(m["S1"])
    assert p.dims == (1, 1, 0) and f.is_surjective()
    p, f = projective_cover(m["S2"])
    assert p.dims == (0, 1, 1) and f.is_surjective()
    p, f = projective_cover(m["[1,2]"])
    assert p == m["[1,2]"] and f.is_isomorphism()
    with pytest.raises(ValueError):
        projective_cover(zero_module(n3.algebra))


def test_resolutions(a2, n3):
    r = projective_resolution(mods(a2)["S1"], 5)
    assert [x.dims for x in r.modules] == [(1, 1), (0, 1)] and r.complete and r.check_exact().ok
    r = projective_resolution(mods(n3)["S1"], 5)
    assert [x.dims for x in r.modules] == [(1, 1, 0), (0, 1, 1), (0, 0, 1)]
    assert r.complete and r.check_exact().ok and r.length == 2
    r = projective_resolution(mods(n3)["[2,3]"], 5)
    assert r.length == 0 and r.complete


def test_ext_examples(a2, n3):
    m = mods(a2)
    assert ext_dim(m["S1"], m["S2"], 1) == 1
    assert ext_dim(m["S1"], m["S2"], 0) == hom_dim(m["S1"], m["S2"])
    m = mods(n3)
    assert ext_dim(m["S2"], m["S3"], 1) == 1
    assert ext_dim(m["S1"], m["S3"], 2) == 1
    for p in ("[1,2]", "[2,3]", "S3"):
        for n in m.values():
            assert ext_dim(m[p], n, 1) == 0 and ext_dim(m[p], n, 2) == 0


def test_kernel_cokernel(n3):
    m = mods(n3)
    (f,) = hom_basis(m["[2,3]"], m["S2"])
    k, inc = map_kernel(f)
    assert k.dims == (0, 0, 1) and inc.is_injective() and inc.is_valid()
    c, _ = map_cokernel(identity_map(m["[1,2]"]))
    assert c.is_zero()
    (g,) = hom_basis(m["S3"], m["[2,3]"])
    c, proj = map_cokernel(g)
    assert c.dims == (0, 1, 0) and proj.is_surjective()


def test_tau_examples(n3):
    m = mods(n3)
    assert tau(m["[1,2]"]) is None and tau(m["S3"]) is None
    assert tau(m["S1"]).dims == (0, 1, 0)
    assert tau(m["S2"]).dims == (0, 0, 1)
    assert tau_inverse(m["S3"]).dims == (0, 1, 0) and tau_inverse(m["S1"]) is None
    with pytest.raises(ValueError):
        tau(direct_sum([m["S1"], m["S2"]])[0])


@pytest.mark.parametrize("name", ["FIX-A2", "FIX-N3", "FIX-N4", "FIX-N5", "FIX-KRON", "FIX-DUAL"])
def test_tau_round_trip(name):
    from higherhom.decomposition import find_isomorphism

    for x in fixture(name).modules.values():
        if not is_injective(x):
            y = tau_inverse(x)
            assert find_isomorphism(tau(y), x) is not None
        if not is_projective(x):
            y = tau(x)
            assert find_isomorphism(tau_inverse(y), x) is not None


def _euler_oracle(alg, x, y):
    """<x, y> = x^T C^-1 y with C[i][j] the number of basis paths from i to j."""
    n = alg.quiver.num_vertices
    c = sympy.zeros(n, n)
    for p in alg.basis:
        c[p.source, p.target] += 1
    return (sympy.Matrix([list(x)]) * c.inv() * sympy.Matrix(list(y)))[0, 0]


@pytest.mark.parametrize("name,gl", [("FIX-A2", 1), ("FIX-N3", 2), ("FIX-N4", 3), ("FIX-N5", 4),
                                     ("FIX-KRON", 1), ("FIX-SQ", 2)])
def test_euler_form_oracle(name, gl):
    p = fixture(name)
    for x in p.modules.values():
        for y in p.modules.values():
            total = sum((-1) ** i * ext_dim(x, y, i) for i in range(gl + 1))
            assert total == _euler_oracle(p.algebra, x.dims, y.dims)
            assert ext_dim(x, y, gl + 1) == 0
