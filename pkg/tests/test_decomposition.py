import pytest

from higherhom.decomposition import (
    DecompositionError,
    decompose,
    endomorphism_radical,
    find_isomorphism,
    is_indecomposable,
    same_summands,
    split,
)
from higherhom.linalg import Matrix
from higherhom.modules import Module, direct_sum, hom_dim
from support import fixture


def test_indecomposable(n3):
    m = n3.modules
    assert is_indecomposable(m["S1"]) and is_indecomposable(m["[1,2]"])
    assert not is_indecomposable(direct_sum([m["S1"], m["S1"]])[0])
    with pytest.raises(ValueError):
        is_indecomposable(Module(n3.algebra, [0, 0, 0], [Matrix.zeros(0, 0)] * 2))


def test_radical_dimension():
    p = fixture("FIX-DUAL")
    # End(P) = K[x]/x^2 has a one-dimensional radical
    assert len(endomorphism_radical(p.modules["P"])) == 1
    assert hom_dim(p.modules["P"], p.modules["P"]) == 2


def test_decompose_examples(a2, n3):
    m = a2.modules
    got = decompose(direct_sum([m["P12"], m["S2"]])[0])
    assert same_summands(got, [(m["P12"], 1), (m["S2"], 1)])
    assert same_summands(decompose(m["S1"]), [(m["S1"], 1)])
    m = n3.modules
    got = decompose(direct_sum([m["[1,2]"], m["[1,2]"]])[0])
    assert same_summands(got, [(m["[1,2]"], 2)])


def test_split_recombines(n3):
    m = n3.modules
    x = direct_sum([m["[2,3]"], m["S2"], m["[2,3]"], m["S1"]])[0]
    parts = split(x, seed=7)
    assert sorted(u.dims for u, _ in parts) == sorted([(0, 1, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0)])
    for u, inc in parts:
        assert inc.is_injective() and inc.target == x and is_indecomposable(u)


def test_isomorphism_certificate(n3):
    m = n3.modules
    x, _, _ = direct_sum([m["S1"], m["S2"]])
    y, _, _ = direct_sum([m["S2"], m["S1"]])
    f = find_isomorphism(x, y)
    assert f is not None and f.is_isomorphism()
    assert find_isomorphism(m["S1"], m["S2"]) is None


def test_kronecker_regular_modules_are_distinguished():
    p = fixture("FIX-KRON")
    r0, r1 = p.modules["R0"], p.modules["R1"]
    assert is_indecomposable(r0) and is_indecomposable(r1)
    assert find_isomorphism(r0, r1) is None
    got = decompose(direct_sum([r0, r1, r0])[0])
    assert same_summands(got, [(r0, 2), (r1, 1)])


def test_error_type_is_exported():
    assert issubclass(DecompositionError, RuntimeError)
