"""Approximations by a finite subcategory, d-kernels, d-cokernels and Hom-exactness checks."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .decomposition import find_isomorphism, is_indecomposable, split
from .linalg import Matrix
from .modules import (
    Module,
    ModuleMap,
    Resolution,
    direct_sum,
    hom_basis,
    map_cokernel,
    map_kernel,
    rank_of_maps,
    std_injective,
    std_projective,
    zero_map,
    zero_module,
)
from .quiver import AlgebraTable, Diagnostics


class NotInAddError(ValueError):
    """A module that was required to lie in add(sub) does not."""


class ConstructionError(RuntimeError):
    """A d-(co)kernel or add-resolution could not be completed inside add(sub)."""

    def __init__(self, message: str, stage: int | None = None):
        super().__init__(message)
        self.stage = stage


class Subcategory:
    """``add`` of a finite list of pairwise non-isomorphic indecomposables."""

    def __init__(self, members: Sequence[Module], names: Sequence[str] | None = None):
        members = tuple(members)
        if not members:
            raise ValueError("a subcategory needs at least one indecomposable")
        alg = members[0].algebra
        if any(m.algebra != alg for m in members):
            raise ValueError("members live over different algebras")
        if names is None:
            names = [m.name or f"M{i}" for i, m in enumerate(members)]
        self.algebra: AlgebraTable = alg
        self.members = members
        self.names = tuple(names)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"Subcategory({', '.join(self.names)})"

    def key(self):
        return (self.algebra, self.members)

    def validate(self, seed: int = 0) -> Diagnostics:
        diag = Diagnostics()
        for name, m in zip(self.names, self.members):
            if m.is_zero() or not is_indecomposable(m, seed):
                diag.append(f"{name} is not indecomposable")
        for i in range(len(self.members)):
            for j in range(i + 1, len(self.members)):
                if find_isomorphism(self.members[i], self.members[j], seed) is not None:
                    diag.append(f"{self.names[i]} and {self.names[j]} are isomorphic")
        return diag

    def index_of(self, x: Module, seed: int = 0) -> int | None:
        """Position of the member isomorphic to the indecomposable ``x``."""
        for i, m in enumerate(self.members):
            if m == x or find_isomorphism(m, x, seed) is not None:
                return i
        return None

    def contains_projectives(self) -> bool:
        alg = self.algebra
        return all(self.index_of(std_projective(alg, v)) is not None for v in range(alg.quiver.num_vertices))

    def contains_injectives(self) -> bool:
        alg = self.algebra
        return all(self.index_of(std_injective(alg, v)) is not None for v in range(alg.quiver.num_vertices))


@dataclass(frozen=True)
class Summand:
    member: int
    inclusion: ModuleMap  # member -> x
    projection: ModuleMap  # x -> member


@lru_cache(maxsize=None)
def _add_decompose(x: Module, members: tuple[Module, ...], seed: int) -> tuple[Summand, ...]:
    if x.is_zero():
        return ()
    parts = x._parts
    if parts is not None and all(p in members for p in parts):
        _, inj, proj = direct_sum(list(parts))
        # rebuild the injections against x itself (x may be a renamed copy)
        out = []
        for p, i, q in zip(parts, inj, proj):
            out.append(Summand(members.index(p), ModuleMap(p, x, i.comps), ModuleMap(x, p, q.comps)))
        return tuple(out)
    pieces = split(x, seed)
    incs = []
    idx = []
    for u, inc in pieces:
        for k, m in enumerate(members):
            theta = find_isomorphism(m, u, seed)
            if theta is not None:
                idx.append(k)
                incs.append(inc @ theta)
                break
        else:
            raise NotInAddError(f"a summand {u!r} of {x!r} is not isomorphic to any member")
    total, _, _ = direct_sum([members[k] for k in idx])
    phi = ModuleMap(total, x, tuple(Matrix.hstack([f.comps[v] for f in incs]) for v in range(len(x.dims))))
    inv = phi.inverse()
    out = []
    off = [0] * len(x.dims)
    for k, f in zip(idx, incs):
        m = members[k]
        comps = []
        for v in range(len(x.dims)):
            rows = inv.comps[v].submatrix(range(off[v], off[v] + m.dims[v]), range(x.dims[v]))
            comps.append(rows)
            off[v] += m.dims[v]
        out.append(Summand(k, f, ModuleMap(x, m, tuple(comps))))
    return tuple(out)


def add_decompose(x: Module, sub: Subcategory, seed: int = 0) -> tuple[Summand, ...]:
    """Write ``x`` as a sum of members with inclusions/projections summing to the identity.

    Raises :class:`NotInAddError` when ``x`` is not in add(sub).
    """
    return _add_decompose(x, sub.members, seed)


def in_add(x: Module, sub: Subcategory, seed: int = 0) -> bool:
    try:
        add_decompose(x, sub, seed)
    except NotInAddError:
        return False
    return True


# ---------------------------------------------------------------------------
# approximations


def _drop_order(copies: list[tuple[int, ModuleMap]], nmembers: int) -> list[int]:
    order = []
    for i in range(nmembers):
        order.extend(reversed([c for c, (k, _) in enumerate(copies) if k == i]))
    return order


def right_approximation(x: Module, sub: Subcategory) -> tuple[Module, ModuleMap]:
    """Minimal ``M0 -> x`` with ``Hom(M_i, M0) -> Hom(M_i, x)`` onto for every member."""
    members = sub.members
    copies = [(i, b) for i, m in enumerate(members) for b in hom_basis(m, x)]
    want = [len(hom_basis(m, x)) for m in members]

    def generates(keep: list[int]) -> bool:
        for j, mj in enumerate(members):
            if not want[j]:
                continue
            images = [copies[c][1] @ h for c in keep for h in hom_basis(mj, members[copies[c][0]])]
            if rank_of_maps(images) < want[j]:
                return False
        return True

    keep = list(range(len(copies)))
    for c in _drop_order(copies, len(members)):
        trial = [k for k in keep if k != c]
        if generates(trial):
            keep = trial
    if not keep:
        z = zero_module(x.algebra)
        return z, zero_map(z, x)
    m0, _, projs = direct_sum([members[copies[c][0]] for c in keep])
    total = zero_map(m0, x)
    for c, p in zip(keep, projs):
        total = total + copies[c][1] @ p
    return m0, total


def left_approximation(x: Module, sub: Subcategory) -> tuple[ModuleMap, Module]:
    """Minimal ``x -> M0`` with ``Hom(M0, M_j) -> Hom(x, M_j)`` onto for every member."""
    members = sub.members
    copies = [(i, b) for i, m in enumerate(members) for b in hom_basis(x, m)]
    want = [len(hom_basis(x, m)) for m in members]

    def generates(keep: list[int]) -> bool:
        for j, mj in enumerate(members):
            if not want[j]:
                continue
            images = [h @ copies[c][1] for c in keep for h in hom_basis(members[copies[c][0]], mj)]
            if rank_of_maps(images) < want[j]:
                return False
        return True

    keep = list(range(len(copies)))
    for c in _drop_order(copies, len(members)):
        trial = [k for k in keep if k != c]
        if generates(trial):
            keep = trial
    if not keep:
        z = zero_module(x.algebra)
        return zero_map(x, z), z
    m0, injs, _ = direct_sum([members[copies[c][0]] for c in keep])
    total = zero_map(x, m0)
    for c, i in zip(keep, injs):
        total = total + i @ copies[c][1]
    return total, m0


# ---------------------------------------------------------------------------
# d-sequences


@dataclass(frozen=True)
class DSequence:
    """``X^0 -> X^1 -> ... -> X^{d+1}``; ``maps[k]`` goes from ``objects[k]`` to ``objects[k+1]``."""

    objects: tuple[Module, ...]
    maps: tuple[ModuleMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.objects) < 3 or len(self.maps) != len(self.objects) - 1:
            raise ValueError("a d-sequence needs d+2 objects and d+1 maps with d >= 1")
        for k, f in enumerate(self.maps):
            if f.source != self.objects[k] or f.target != self.objects[k + 1]:
                raise ValueError(f"map {k} does not connect objects {k} and {k + 1}")

    @property
    def d(self) -> int:
        return len(self.objects) - 2

    def is_complex(self) -> bool:
        return all((g @ f).is_zero() for f, g in zip(self.maps, self.maps[1:]))

    def dim_vectors(self) -> list[tuple[int, ...]]:
        return [x.dims for x in self.objects]

    def alternating_dim_sum(self) -> tuple[int, ...]:
        n = len(self.objects[0].dims)
        return tuple(sum((-1) ** k * x.dims[v] for k, x in enumerate(self.objects)) for v in range(n))


def _require_add(x: Module, sub: Subcategory, what: str):
    if not in_add(x, sub):
        raise NotInAddError(f"{what} is not in add of {sub!r}")


def d_cokernel(f: ModuleMap, sub: Subcategory, d: int) -> DSequence:
    """``f`` followed by a d-cokernel: cokernel, then alternate left approximations and cokernels.

    ``result.maps[1:]`` is the d-cokernel proper.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    _require_add(f.source, sub, "source of f")
    _require_add(f.target, sub, "target of f")
    objs = [f.source, f.target]
    maps = [f]
    c, prev = map_cokernel(f)
    for _ in range(2, d + 1):
        lam, xk = left_approximation(c, sub)
        objs.append(xk)
        maps.append(lam @ prev)
        c, prev = map_cokernel(lam)
    if not in_add(c, sub):
        raise ConstructionError(
            f"stage {d + 1}: the final cokernel {list(c.dims)} is not in add(sub); "
            "the subcategory is not d-cluster tilting for this d",
            stage=d + 1,
        )
    objs.append(c)
    maps.append(prev)
    return DSequence(tuple(objs), tuple(maps))


def d_kernel(f: ModuleMap, sub: Subcategory, d: int) -> DSequence:
    """A d-kernel of ``f`` followed by ``f``: kernel, then alternate right approximations and kernels.

    ``result.maps[:-1]`` is the d-kernel proper.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    _require_add(f.source, sub, "source of f")
    _require_add(f.target, sub, "target of f")
    objs = [f.target, f.source]
    maps = [f]
    k, prev = map_kernel(f)
    for _ in range(2, d + 1):
        xk, rho = right_approximation(k, sub)
        objs.append(xk)
        maps.append(prev @ rho)
        k, prev = map_kernel(rho)
    if not in_add(k, sub):
        raise ConstructionError(
            f"stage 0: the final kernel {list(k.dims)} is not in add(sub); "
            "the subcategory is not d-cluster tilting for this d",
            stage=0,
        )
    objs.append(k)
    maps.append(prev)
    return DSequence(tuple(reversed(objs)), tuple(reversed(maps)))


def m_resolution(x: Module, sub: Subcategory, d: int) -> Resolution:
    """``0 -> M_n -> ... -> M_1 -> x -> 0`` with terms in add(sub) and ``n <= d``."""
    if not sub.contains_projectives():
        raise ValueError("add-resolutions need every indecomposable projective in the subcategory")
    if x.is_zero():
        return Resolution([], [], zero_map(x, x), True)
    m1, eps = right_approximation(x, sub)
    if not eps.is_surjective():
        raise ConstructionError("right approximation is not surjective")
    mods, maps = [m1], []
    k, inc = map_kernel(eps)
    while not k.is_zero():
        if len(mods) >= d:
            raise ConstructionError(
                f"add-resolution of {x!r} does not close within {d} steps (kernel {list(k.dims)} remains)",
                stage=len(mods),
            )
        mk, rho = right_approximation(k, sub)
        maps.append(inc @ rho)
        mods.append(mk)
        k, inc = map_kernel(rho)
    return Resolution(mods, maps, eps, True)


# ---------------------------------------------------------------------------
# Hom-exactness


@dataclass
class DExactReport:
    left: bool
    right: bool
    left_failure: tuple[str, int] | None = None
    right_failure: tuple[str, int] | None = None
    is_complex: bool = True

    @property
    def verdict(self) -> str:
        if self.left and self.right:
            return "both"
        if self.left:
            return "left"
        if self.right:
            return "right"
        return "neither"


def _contravariant_failure(seq: DSequence, y: Module) -> int | None:
    """First position k where ``0 -> (X^{d+1},Y) -> ... -> (X^1,Y) -> (X^0,Y)`` fails, else None."""
    objs, maps = seq.objects, seq.maps
    n = len(objs) - 1  # index of X^{d+1}
    dims = [len(hom_basis(x, y)) for x in objs]
    # r[k]: rank of (X^{k+1}, Y) -> (X^k, Y)
    r = [rank_of_maps([phi @ maps[k] for phi in hom_basis(objs[k + 1], y)]) for k in range(n)]
    if r[n - 1] != dims[n]:
        return n
    for k in range(n - 1, 0, -1):
        if r[k] + r[k - 1] != dims[k]:
            return k
    return None


def _covariant_failure(seq: DSequence, y: Module) -> int | None:
    """First position k where ``0 -> (Y,X^0) -> ... -> (Y,X^{d+1})`` fails, else None."""
    objs, maps = seq.objects, seq.maps
    n = len(objs) - 1
    dims = [len(hom_basis(y, x)) for x in objs]
    s = [rank_of_maps([maps[k] @ phi for phi in hom_basis(y, objs[k])]) for k in range(n)]
    if s[0] != dims[0]:
        return 0
    for k in range(1, n):
        if s[k - 1] + s[k] != dims[k]:
            return k
    return None


def verify_d_exact(seq: DSequence, sub: Subcategory) -> DExactReport:
    """Rank test of both Hom sequences against every member of ``sub``.

    ``left`` is the contravariant test ``0 -> Hom(X^{d+1}, Y) -> ... -> Hom(X^0, Y)``,
    ``right`` the covariant test ``0 -> Hom(Y, X^0) -> ... -> Hom(Y, X^{d+1})``;
    failures are reported as ``(member name, object index)``.
    """
    if not seq.is_complex():
        return DExactReport(False, False, ("<complex>", 0), ("<complex>", 0), is_complex=False)
    rep = DExactReport(True, True)
    for name, y in zip(sub.names, sub.members):
        if rep.left:
            k = _contravariant_failure(seq, y)
            if k is not None:
                rep.left, rep.left_failure = False, (name, k)
        if rep.right:
            k = _covariant_failure(seq, y)
            if k is not None:
                rep.right, rep.right_failure = False, (name, k)
    return rep
