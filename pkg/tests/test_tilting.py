from itertools import combinations

import pytest

from higherhom.approximation import Subcategory
from higherhom.tilting import (
    AtlasError,
    IndecAtlas,
    brute_force_d_ct,
    certify_atlas,
    check_cotorsion_pair,
    ext_table,
    is_d_cluster_tilting,
    is_d_rigid,
    search_d_ct,
    sub_from_indices,
)
from support import fixture


def names(subs):
    return [sorted(s.names) for s in subs]


def test_certify(n3):
    atlas = n3.atlas_sub()
    assert certify_atlas(atlas).ok
    m = n3.modules
    missing = IndecAtlas([m[k] for k in ("S1", "S3", "[1,2]", "[2,3]")], ["S1", "S3", "[1,2]", "[2,3]"])
    diag = certify_atlas(missing)
    assert any(x.startswith("tau(S1)") for x in diag)
    dup = IndecAtlas(list(atlas.members) + [m["S2"]], list(atlas.names) + ["S2copy"])
    assert any("isomorphic" in x for x in certify_atlas(dup))
    with pytest.raises(AtlasError):
        is_d_cluster_tilting(n3.sub(), missing, 2)


def test_ext_tables(a2, n3):
    assert ext_table(n3.sub(), 1) == [[[0]] * 4 for _ in range(4)]
    t = ext_table(a2.sub(), 1)
    nonzero = [(a2.subcategory[i], a2.subcategory[j]) for i in range(3) for j in range(3) if t[i][j][0]]
    assert nonzero == [("S1", "S2")]
    m = n3.modules
    proj = Subcategory([m["[1,2]"], m["[2,3]"], m["S3"]])
    assert all(v == 0 for row in ext_table(proj, 2) for col in row for v in col)


def test_rigidity(n3):
    assert is_d_rigid(n3.atlas_sub(), 1).verdict
    assert is_d_rigid(n3.sub(), 2).verdict
    rep = is_d_rigid(n3.atlas_sub(), 2)
    assert not rep.verdict
    assert ("rigid", ("S2", "S3"), 1, 1) in [(f.condition, f.witness, f.ext_index, f.dim) for f in rep.failures]


def test_cluster_tilting(a2, n3):
    assert is_d_cluster_tilting(a2.atlas_sub(), a2.atlas_sub(), 1).verdict
    assert is_d_cluster_tilting(n3.sub(), n3.atlas_sub(), 2).verdict
    bigger = Subcategory(list(n3.sub().members) + [n3.modules["S2"]])
    rep = is_d_cluster_tilting(bigger, n3.atlas_sub(), 2)
    assert not rep.verdict and {f.condition for f in rep.failures} == {"rigid"}


def test_search(a2, n3):
    assert names(search_d_ct(n3.atlas_sub(), 2)) == [sorted(n3.subcategory)]
    assert names(search_d_ct(a2.atlas_sub(), 1)) == [sorted(a2.atlas)]
    assert search_d_ct(a2.atlas_sub(), 2) == []


@pytest.mark.parametrize("name,d", [("FIX-A2", 1), ("FIX-A2", 2), ("FIX-N3", 1), ("FIX-N3", 2), ("FIX-N3", 3),
                                    ("FIX-N4", 2), ("FIX-N4", 3), ("FIX-N5", 2), ("FIX-N5", 4),
                                    ("FIX-DUAL", 2), ("FIX-K1", 2)])
def test_search_matches_brute_force(name, d):
    atlas = fixture(name).atlas_sub()
    assert names(search_d_ct(atlas, d)) == names(brute_force_d_ct(atlas, d))


def test_known_cluster_tilting_in_longer_chains(n4, n5):
    assert names(search_d_ct(n4.atlas_sub(), 3)) == [sorted(n4.subcategory)]
    assert names(search_d_ct(n5.atlas_sub(), 2)) == [sorted(n5.subcategory)]
    assert search_d_ct(n4.atlas_sub(), 2) == []


def test_cotorsion_examples(n3):
    rep = check_cotorsion_pair(n3.sub(), n3.atlas_sub())
    assert rep.verdict
    assert sorted((w["kind"], tuple(w["terms"])) for w in rep.witnesses) == [
        ("left", ("S2", "[1,2]", "S1")),
        ("right", ("S3", "[2,3]", "S2")),
    ]
    rep = check_cotorsion_pair(n3.atlas_sub(), n3.atlas_sub())
    assert not rep.verdict and any(f.ext_index == 1 and f.dim == 1 for f in rep.failures)
    k1 = fixture("FIX-K1")
    assert check_cotorsion_pair(k1.atlas_sub(), k1.atlas_sub()).verdict


@pytest.mark.parametrize("name", ["FIX-N3", "FIX-N4", "FIX-N5", "FIX-A2", "FIX-DUAL"])
def test_cotorsion_matches_cluster_tilting(name):
    atlas = fixture(name).atlas_sub()
    core = {i for i, m in enumerate(atlas.members)
            if any(m == x for x in _proj_inj(atlas))}
    rest = [i for i in range(len(atlas)) if i not in core]
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            sub = sub_from_indices(atlas, sorted(core) + list(extra))
            assert check_cotorsion_pair(sub, atlas).verdict == is_d_cluster_tilting(sub, atlas, 2).verdict


def _proj_inj(atlas):
    from higherhom.modules import std_injective, std_projective

    alg = atlas.algebra
    out = []
    for v in range(alg.quiver.num_vertices):
        for m in (std_projective(alg, v), std_injective(alg, v)):
            out.append(atlas.members[atlas.index_of(m)])
    return out


def test_enlarging_preserves_ext_entries(n3):
    small = n3.sub()
    big = Subcategory(list(small.members) + [n3.modules["S2"]], list(small.names) + ["S2"])
    ts, tb = ext_table(small, 2), ext_table(big, 2)
    for i in range(len(small)):
        for j in range(len(small)):
            assert ts[i][j] == tb[i][j]
