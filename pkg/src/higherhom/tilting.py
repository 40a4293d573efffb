"""d-rigidity, d-cluster tilting checks and search, and the cotorsion-pair test for d = 2."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .approximation import (
    NotInAddError,
    Subcategory,
    add_decompose,
    left_approximation,
    right_approximation,
)
from .decomposition import find_isomorphism, is_indecomposable
from .modules import Module, ext_dim, map_cokernel, map_kernel, std_injective, std_projective, tau, tau_inverse
from .quiver import Diagnostics


class AtlasError(ValueError):
    """The atlas failed certification (or a module is missing from it)."""


class IndecAtlas(Subcategory):
    """A claimed complete, irredundant list of the indecomposables of mod A."""

    def __repr__(self):
        return f"IndecAtlas({', '.join(self.names)})"


@lru_cache(maxsize=None)
def _certify(members: tuple[Module, ...], names: tuple[str, ...], seed: int) -> tuple[str, ...]:
    atlas = IndecAtlas(members, names)
    out = list(atlas.validate(seed))
    alg = atlas.algebra
    for v in range(alg.quiver.num_vertices):
        label = alg.quiver.vertices[v]
        if atlas.index_of(std_projective(alg, v), seed) is None:
            out.append(f"projective P{label} is missing")
        if atlas.index_of(std_injective(alg, v), seed) is None:
            out.append(f"injective I{label} is missing")
    for name, m in zip(names, members):
        if m.is_zero() or not is_indecomposable(m, seed):
            continue
        for op, fn in (("tau", tau), ("tau^-1", tau_inverse)):
            y = fn(m)
            if y is not None and not y.is_zero() and atlas.index_of(y, seed) is None:
                out.append(f"{op}({name}) = {list(y.dims)} is not in the atlas")
    return tuple(out)


def certify_atlas(atlas: IndecAtlas, seed: int = 0) -> Diagnostics:
    """Necessary conditions for completeness: indecomposable, irredundant,
    contains all projectives and injectives, closed under tau and tau^-1."""
    return Diagnostics(_certify(atlas.members, atlas.names, seed))


def _require_certified(atlas: IndecAtlas, seed: int = 0):
    diag = certify_atlas(atlas, seed)
    if not diag.ok:
        raise AtlasError("atlas is not certified: " + "; ".join(diag))


def ext_table(sub: Subcategory, max_i: int) -> list[list[list[int]]]:
    """``table[i][j][k-1] = dim Ext^k(M_i, M_j)`` for ``1 <= k <= max_i``."""
    if max_i < 1:
        raise ValueError("max_i must be >= 1")
    return [[[ext_dim(a, b, k) for k in range(1, max_i + 1)] for b in sub.members] for a in sub.members]


@dataclass(frozen=True)
class Failure:
    condition: str
    witness: tuple[str, ...]
    ext_index: int | None = None
    dim: int | None = None

    def as_dict(self):
        return {"condition": self.condition, "witness": list(self.witness),
                "ext_index": self.ext_index, "dim": self.dim}


@dataclass
class CTReport:
    failures: list[Failure] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.verdict


def is_d_rigid(sub: Subcategory, d: int) -> CTReport:
    if d < 1:
        raise ValueError("d must be >= 1")
    rep = CTReport()
    for k in range(1, d):
        for na, a in zip(sub.names, sub.members):
            for nb, b in zip(sub.names, sub.members):
                e = ext_dim(a, b, k)
                if e:
                    rep.failures.append(Failure("rigid", (na, nb), k, e))
    return rep


def _atlas_positions(sub: Subcategory, atlas: IndecAtlas, seed: int) -> list[int]:
    pos = []
    for name, m in zip(sub.names, sub.members):
        i = atlas.index_of(m, seed)
        if i is None:
            raise AtlasError(f"{name} is not isomorphic to any atlas member")
        pos.append(i)
    return pos


def is_d_cluster_tilting(sub: Subcategory, atlas: IndecAtlas, d: int, seed: int = 0) -> CTReport:
    """Generating-cogenerating, d-rigid, and equal to both Ext-orthogonal closures inside the atlas.

    Functorial finiteness is automatic for a finite list and is only noted.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    _require_certified(atlas, seed)
    inside = set(_atlas_positions(sub, atlas, seed))
    rep = CTReport(notes=["functorially finite: finite subcategory, approximations constructed explicitly"])
    alg = atlas.algebra
    for v in range(alg.quiver.num_vertices):
        label = alg.quiver.vertices[v]
        if sub.index_of(std_projective(alg, v), seed) is None:
            rep.failures.append(Failure("generating", (f"P{label}",)))
        if sub.index_of(std_injective(alg, v), seed) is None:
            rep.failures.append(Failure("cogenerating", (f"I{label}",)))
    rep.failures.extend(is_d_rigid(sub, d).failures)
    for i, (nx, x) in enumerate(zip(atlas.names, atlas.members)):
        if i in inside:
            continue
        if all(ext_dim(x, m, k) == 0 for m in sub.members for k in range(1, d)):
            rep.failures.append(Failure("left-orthogonal-not-in-sub", (nx,)))
        if all(ext_dim(m, x, k) == 0 for m in sub.members for k in range(1, d)):
            rep.failures.append(Failure("right-orthogonal-not-in-sub", (nx,)))
    return rep


def _ext_pairs(atlas: IndecAtlas, d: int) -> list[list[bool]]:
    n = len(atlas)
    return [[any(ext_dim(atlas.members[i], atlas.members[j], k) for k in range(1, d)) for j in range(n)]
            for i in range(n)]


def _core(atlas: IndecAtlas, seed: int) -> list[int]:
    alg = atlas.algebra
    core = set()
    for v in range(alg.quiver.num_vertices):
        for m in (std_projective(alg, v), std_injective(alg, v)):
            i = atlas.index_of(m, seed)
            if i is None:
                raise AtlasError("atlas misses a projective or injective")
            core.add(i)
    return sorted(core)


def sub_from_indices(atlas: IndecAtlas, idx: Sequence[int]) -> Subcategory:
    idx = sorted(idx)
    return Subcategory([atlas.members[i] for i in idx], [atlas.names[i] for i in idx])


def search_d_ct(atlas: IndecAtlas, d: int, seed: int = 0) -> list[Subcategory]:
    """All d-cluster tilting subcategories made of atlas members, in canonical order.

    Backtracks over the members outside the projective-injective core, keeping
    only d-rigid partial choices.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    _require_certified(atlas, seed)
    ext = _ext_pairs(atlas, d)
    core = _core(atlas, seed)
    rest = [i for i in range(len(atlas)) if i not in core]

    def rigid_with(chosen: list[int], j: int) -> bool:
        return not ext[j][j] and all(not ext[i][j] and not ext[j][i] for i in chosen)

    found: list[tuple[int, ...]] = []
    if any(ext[i][j] for i in core for j in core):
        return []

    def rec(pos: int, chosen: list[int]):
        if pos == len(rest):
            cand = tuple(sorted(chosen))
            if is_d_cluster_tilting(sub_from_indices(atlas, cand), atlas, d, seed).verdict:
                found.append(cand)
            return
        j = rest[pos]
        if rigid_with(chosen, j):
            rec(pos + 1, chosen + [j])
        rec(pos + 1, chosen)

    rec(0, list(core))
    found.sort(key=lambda t: (len(t), t))
    return [sub_from_indices(atlas, t) for t in found]


def brute_force_d_ct(atlas: IndecAtlas, d: int, seed: int = 0) -> list[Subcategory]:
    """Filter every nonempty subset through :func:`is_d_cluster_tilting` (oracle for the search)."""
    n = len(atlas)
    found = []
    for r in range(1, n + 1):
        for idx in combinations(range(n), r):
            if is_d_cluster_tilting(sub_from_indices(atlas, idx), atlas, d, seed).verdict:
                found.append(idx)
    found.sort(key=lambda t: (len(t), t))
    return [sub_from_indices(atlas, t) for t in found]


def describe(x: Module, sub: Subcategory, seed: int = 0) -> str:
    """Name an object of add(sub) as a sum of member names."""
    if x.is_zero():
        return "0"
    parts = sorted(s.member for s in add_decompose(x, sub, seed))
    return " + ".join(sub.names[k] for k in parts)


def check_cotorsion_pair(sub: Subcategory, atlas: IndecAtlas, seed: int = 0) -> CTReport:
    """Is (add sub, add sub) a complete cotorsion pair, tested on the atlas?

    Checks both Ext^1-orthogonal closures, then builds
    ``0 -> X -> Y^X -> X^X -> 0`` and ``0 -> Y_X -> X_X -> X -> 0`` for every
    atlas member from minimal approximations.
    """
    _require_certified(atlas, seed)
    inside = set(_atlas_positions(sub, atlas, seed))
    rep = CTReport()
    for i, (nx, x) in enumerate(zip(atlas.names, atlas.members)):
        left_bad = [(nm, ext_dim(x, m, 1)) for nm, m in zip(sub.names, sub.members) if ext_dim(x, m, 1)]
        right_bad = [(nm, ext_dim(m, x, 1)) for nm, m in zip(sub.names, sub.members) if ext_dim(m, x, 1)]
        if i in inside:
            for nm, e in left_bad:
                rep.failures.append(Failure("ext1-left-orthogonal", (nx, nm), 1, e))
            for nm, e in right_bad:
                rep.failures.append(Failure("ext1-right-orthogonal", (nm, nx), 1, e))
        else:
            if not left_bad:
                rep.failures.append(Failure("left-perp-not-in-sub", (nx,), 1, 0))
            if not right_bad:
                rep.failures.append(Failure("right-perp-not-in-sub", (nx,), 1, 0))

    for i, (nx, x) in enumerate(zip(atlas.names, atlas.members)):
        lam, y = left_approximation(x, sub)
        c, _ = map_cokernel(lam)
        if not lam.is_injective():
            rep.failures.append(Failure("left-approximation-not-mono", (nx,)))
        else:
            try:
                seq = {"kind": "left", "module": nx, "terms": [nx, describe(y, sub, seed), describe(c, sub, seed)]}
                if i not in inside:
                    rep.witnesses.append(seq)
            except NotInAddError:
                rep.failures.append(Failure("left-cokernel-not-in-sub", (nx,)))
        z, rho = right_approximation(x, sub)
        k, _ = map_kernel(rho)
        if not rho.is_surjective():
            rep.failures.append(Failure("right-approximation-not-epi", (nx,)))
        else:
            try:
                seq = {"kind": "right", "module": nx, "terms": [describe(k, sub, seed), describe(z, sub, seed), nx]}
                if i not in inside:
                    rep.witnesses.append(seq)
            except NotInAddError:
                rep.failures.append(Failure("right-kernel-not-in-sub", (nx,)))
    return rep


def isomorphic_subcategories(a: Subcategory, b: Subcategory, seed: int = 0) -> bool:
    """Same members up to isomorphism and order."""
    if len(a) != len(b):
        return False
    return all(any(find_isomorphism(x, y, seed) is not None for y in b.members) for x in a.members)
