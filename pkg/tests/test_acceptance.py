"""Acceptance criteria, one test each; every test also records a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or ``python tests/test_acceptance.py`` to print them directly.
"""
from __future__ import annotations

import subprocess
import sys
import time
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from higherhom import clear_caches  # noqa: E402
from higherhom.approximation import d_kernel, m_resolution, verify_d_exact  # noqa: E402
from higherhom.decomposition import decompose, find_isomorphism  # noqa: E402
from higherhom.functors import (  # noqa: E402
    build_auslander_algebra,
    functor_cokernel,
    is_effaceable,
    match_structure_constants,
    nat_hom,
    presentation_effaceable,
    yoneda_map,
    yoneda_module,
)
from higherhom.modules import ext_dim, hom_basis, hom_dim, projective_resolution, std_injective, std_projective  # noqa: E402
from higherhom.problem import load_fixture  # noqa: E402
from higherhom.tilting import (  # noqa: E402
    brute_force_d_ct,
    check_cotorsion_pair,
    is_d_cluster_tilting,
    search_d_ct,
    sub_from_indices,
)
from support import axiom_sample_count, axiom_suite, sample_morphisms  # noqa: E402

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, seconds: float, limit: float | None, detail: str) -> bool:
    within = limit is None or seconds < limit
    verdict = ok and within
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    RESULTS.append(f"criterion {n:2d} {'PASS' if verdict else 'FAIL'}  {title}: {detail}; {seconds:.2f}s{budget}")
    return verdict


def timed(fn):
    clear_caches()
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


def _iso(a, b):
    return find_isomorphism(a, b) is not None


def crit1():
    p = load_fixture("FIX-A2")
    names = ["S1", "S2", "P12"]
    nonzero = {}
    ext2 = 0
    for a in names:
        for b in names:
            e1 = ext_dim(p.modules[a], p.modules[b], 1)
            if e1:
                nonzero[(a, b)] = e1
            ext2 += ext_dim(p.modules[a], p.modules[b], 2)
    res = projective_resolution(p.modules["S1"], 3)
    oracle = [x.dims for x in res.modules] == [(1, 1), (0, 1)] and res.complete
    ok = nonzero == {("S1", "S2"): 1} and ext2 == 0 and oracle
    return ok, f"nonzero Ext^1 = {nonzero}, sum of Ext^2 = {ext2}, resolution 0->P2->P12->S1->0: {oracle}"


def crit2():
    p = load_fixture("FIX-A2")
    atlas = p.atlas_sub()
    full = is_d_cluster_tilting(atlas, atlas, 1).verdict
    proper = [sub_from_indices(atlas, idx) for r in range(1, len(atlas)) for idx in combinations(range(len(atlas)), r)]
    wrong = [s.names for s in proper if is_d_cluster_tilting(s, atlas, 1).verdict]
    ok = full and not wrong
    return ok, f"full atlas {full}, {len(proper)} proper subsets all false: {not wrong}"


def crit3():
    p = load_fixture("FIX-N3")
    atlas = p.atlas_sub()
    found = search_d_ct(atlas, 2)
    oracle = brute_force_d_ct(atlas, 2)
    target = p.sub()
    ok = (len(found) == 1 and len(found[0]) == len(target)
          and all(any(_iso(a, b) for b in found[0].members) for a in target.members)
          and [s.names for s in found] == [s.names for s in oracle])
    return ok, f"search {[s.names for s in found]}, brute force over 2^5 subsets {[s.names for s in oracle]}"


def crit4():
    p = load_fixture("FIX-N3")
    sub = p.sub()
    results = axiom_suite(sub, 2)
    failed, both = [], 0
    for label, kind, seq in results:
        if isinstance(seq, Exception):
            failed.append((label, kind, repr(seq)))
            continue
        rep = verify_d_exact(seq, sub)
        if not (rep.left if kind == "dcokernel" else rep.right):
            failed.append((label, kind, rep.verdict))
        both += rep.verdict == "both"
    ok = not failed
    return ok, (f"{len(results) - len(failed)}/{len(results)} constructions on {axiom_sample_count(sub)} morphisms "
                f"pass ({both} exact in both directions); first failure {failed[:1]}")


def crit5():
    p = load_fixture("FIX-N3")
    sub, m = p.sub(), p.modules
    (f,) = hom_basis(m["[1,2]"], m["S1"])
    seq = d_kernel(f, sub, 2)
    terms_ok = all(_iso(a, m[b]) for a, b in zip(seq.objects, ["S3", "[2,3]", "[1,2]", "S1"]))
    rep = verify_d_exact(seq, sub)
    alt = seq.alternating_dim_sum()
    ok = terms_ok and rep.verdict == "both" and not any(alt)
    return ok, f"terms S3->[2,3]->[1,2]->S1 {terms_ok}, exactness {rep.verdict}, alternating sum {alt}"


def crit6():
    p = load_fixture("FIX-N3")
    sub, m = p.sub(), p.modules
    bad = []
    for name in p.atlas:
        res = m_resolution(m[name], sub, 2)
        good = res.check_exact().ok and len(res.modules) <= 2
        good = good and all(sub.index_of(u) is not None for t in res.modules for u, _ in decompose(t))
        if not good:
            bad.append(name)
    res = m_resolution(m["S2"], sub, 2)
    s2 = len(res.modules) == 2 and _iso(res.modules[0], m["[2,3]"]) and _iso(res.modules[1], m["S3"])
    ok = not bad and s2
    return ok, f"{len(p.atlas) - len(bad)}/{len(p.atlas)} atlas members resolved, S2: 0->S3->[2,3]->S2->0 {s2}"


def crit7():
    p = load_fixture("FIX-N3")
    sub = p.sub()
    g = build_auslander_algebra(sub)
    _, side = match_structure_constants(g)
    ys = [yoneda_module(x, g) for x in sub.members]
    eq = sum(len(nat_hom(ys[a], ys[b])) == hom_dim(x, y)
             for a, x in enumerate(sub.members) for b, y in enumerate(sub.members))
    ok = g.dim == 7 and g.e_dim() == 5 == p.algebra.dim and side is not None and eq == 16
    return ok, f"dim Gamma {g.dim}, dim eGe {g.e_dim()}, dim A {p.algebra.dim}, matched {side}, Hom equalities {eq}/16"


def crit8():
    p = load_fixture("FIX-N3")
    sub = p.sub()
    g = build_auslander_algebra(sub)
    total = agree = epis = 0
    for _, f in sample_morphisms(sub):
        c, _ = functor_cokernel(yoneda_map(f, g))
        epi = f.is_surjective()
        a, b = is_effaceable(c, g), presentation_effaceable(c)
        total += 1
        epis += epi
        agree += a == b == epi
    ok = agree == total
    return ok, f"{agree}/{total} morphisms agree ({epis} epimorphisms)"


def crit9():
    p = load_fixture("FIX-N3")
    atlas = p.atlas_sub()
    alg = atlas.algebra
    core = {atlas.index_of(m) for v in range(alg.quiver.num_vertices)
            for m in (std_projective(alg, v), std_injective(alg, v))}
    checked = agree = 0
    for r in range(len(atlas) + 1):
        for idx in combinations(range(len(atlas)), r):
            if not core <= set(idx):
                continue
            sub = sub_from_indices(atlas, idx)
            checked += 1
            agree += check_cotorsion_pair(sub, atlas).verdict == is_d_cluster_tilting(sub, atlas, 2).verdict
    ok = checked > 0 and agree == checked
    return ok, f"{agree}/{checked} of the 2^5 subsets containing proj+inj agree"


def crit10():
    here = Path(__file__).parent
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(here / "test_properties.py")], capture_output=True, text=True, cwd=here.parent)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    return proc.returncode == 0, f"property suite: {tail}"


CRITERIA = [
    (1, "Ext tables FIX-A2", crit1, 1.0),
    (2, "1-CT triviality FIX-A2", crit2, 1.0),
    (3, "2-CT search FIX-N3", crit3, 5.0),
    (4, "d-(co)kernel axiom suite FIX-N3", crit4, 30.0),
    (5, "worked 2-exact sequence", crit5, None),
    (6, "add-resolutions FIX-N3", crit6, 1.0),
    (7, "functor category FIX-N3", crit7, 2.0),
    (8, "effaceable characterisation", crit8, None),
    (9, "cotorsion equivalence FIX-N3", crit9, 10.0),
    (10, "property suites", crit10, 60.0),
]


def _run(n):
    _, title, fn, limit = CRITERIA[n - 1]
    ok, detail, secs = timed(fn)
    return record(n, title, ok, secs, limit, detail), RESULTS[-1]


def test_criterion_01():
    ok, line = _run(1)
    assert ok, line


def test_criterion_02():
    ok, line = _run(2)
    assert ok, line


def test_criterion_03():
    ok, line = _run(3)
    assert ok, line


def test_criterion_04():
    ok, line = _run(4)
    assert ok, line


def test_criterion_05():
    ok, line = _run(5)
    assert ok, line


def test_criterion_06():
    ok, line = _run(6)
    assert ok, line


def test_criterion_07():
    ok, line = _run(7)
    assert ok, line


def test_criterion_08():
    ok, line = _run(8)
    assert ok, line


def test_criterion_09():
    ok, line = _run(9)
    assert ok, line


def test_criterion_10():
    ok, line = _run(10)
    assert ok, line


if __name__ == "__main__":
    results = [_run(n)[0] for n, *_ in CRITERIA]
    print("\n".join(RESULTS))
    sys.exit(0 if all(results) else 1)
