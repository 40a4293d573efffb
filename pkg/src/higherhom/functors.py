"""Finitely presented functors on add(sub) as modules over the Auslander algebra.

A functor ``F`` is stored by its values ``F(M_i)`` and, for every basis element
``g: M_i -> M_j`` of the Auslander algebra, the matrix ``F(g): F(M_j) -> F(M_i)``.
The algebra multiplies by composition, ``g . h = g o h``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _rep
from .approximation import DSequence, Subcategory, add_decompose
from .decomposition import endomorphism_radical, find_isomorphism
from .linalg import ONE, ZERO, Matrix, inverse, rank
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    hom_basis,
    hom_space,
    identity_map,
    is_projective,
    left_multiplication,
    std_projective,
    zero_map,
    zero_module,
)
from .quiver import AlgebraTable, validate_algebra


class PreconditionError(ValueError):
    pass


class AuslanderAlgebra:
    """``End(M_0 + ... + M_{n-1})`` with one basis block per ``Hom(M_i, M_j)``.

    Diagonal blocks use ``[identity] + radical basis`` so that simple functors
    have the obvious form; off-diagonal blocks use ``hom_basis``.
    """

    def __init__(self, sub: Subcategory):
        self.sub = sub
        n = len(sub)
        self.blocks: dict[tuple[int, int], list[ModuleMap]] = {}
        self._coord: dict[tuple[int, int], Matrix] = {}
        for i, mi in enumerate(sub.members):
            for j, mj in enumerate(sub.members):
                if i == j:
                    basis = [identity_map(mi)] + endomorphism_radical(mi)
                else:
                    basis = list(hom_basis(mi, mj))
                self.blocks[(i, j)] = basis
                if basis:
                    hs = hom_space(mi, mj)
                    change = Matrix.from_columns([hs.coordinates(b) for b in basis], len(basis))
                    self._coord[(i, j)] = inverse(change)
        self.elements: list[tuple[int, int, ModuleMap]] = []
        self.offset: dict[tuple[int, int], int] = {}
        labels = []
        for i in range(n):
            for j in range(n):
                self.offset[(i, j)] = len(self.elements)
                for k, b in enumerate(self.blocks[(i, j)]):
                    self.elements.append((i, j, b))
                    if i == j and k == 0:
                        labels.append(f"id[{sub.names[i]}]")
                    else:
                        labels.append(f"{sub.names[i]}->{sub.names[j]}#{k}")
        mult = {}
        for x, (i, j, g) in enumerate(self.elements):
            for y, (k, l, h) in enumerate(self.elements):
                # x . y = g o h needs h: M_k -> M_l with l == i
                if l != i:
                    continue
                c = self.coordinates(g @ h)
                off = self.offset[(k, j)]
                mult[(x, y)] = tuple((off + r, v) for r, v in enumerate(c) if v)
        idem = [self.offset[(i, i)] for i in range(n)]
        self.table = AlgebraTable(labels, mult, idem)
        self.e = tuple(i for i, m in enumerate(sub.members) if is_projective(m))

    @property
    def dim(self) -> int:
        return self.table.dim

    @property
    def num_vertices(self) -> int:
        return len(self.sub)

    def coordinates(self, g: ModuleMap) -> list[Fraction]:
        """Coordinates of ``g: M_i -> M_j`` in the (i, j) block basis."""
        i = self.sub.members.index(g.source)
        j = self.sub.members.index(g.target)
        basis = self.blocks[(i, j)]
        if not basis:
            return []
        c = self._coord[(i, j)].apply(hom_space(g.source, g.target).coordinates(g))
        return list(c)

    def block_range(self, i: int, j: int) -> range:
        off = self.offset[(i, j)]
        return range(off, off + len(self.blocks[(i, j)]))

    def arrows(self) -> list[tuple[int, int]]:
        # F(g) for g: M_i -> M_j maps F(M_j) -> F(M_i)
        return [(j, i) for i, j, _ in self.elements]

    def e_dim(self) -> int:
        return sum(len(self.blocks[(i, j)]) for i in self.e for j in self.e)

    def validate(self):
        return validate_algebra(self.table)

    def projective_identification(self) -> dict[int, tuple[int, ModuleMap]]:
        """For each vertex v of A: the member index of P(v) and an isomorphism P(v) -> member."""
        alg = self.sub.algebra
        out = {}
        for v in range(alg.quiver.num_vertices):
            p = std_projective(alg, v)
            for i in self.e:
                theta = find_isomorphism(p, self.sub.members[i])
                if theta is not None:
                    out[v] = (i, theta)
                    break
            else:
                raise PreconditionError(f"P{alg.quiver.vertices[v]} is not in the subcategory")
        return out

    def path_image(self, b: int, ident=None) -> ModuleMap:
        """The map ``M_w -> M_v`` representing the basis path ``b`` from v to w."""
        alg = self.sub.algebra
        ident = ident or self.projective_identification()
        p = alg.basis[b]
        v, w = p.source, p.target
        iv, tv = ident[v]
        iw, tw = ident[w]
        lam = left_multiplication(alg, w, v, {b: ONE})
        return tv @ lam @ tw.inverse()


def build_auslander_algebra(sub: Subcategory) -> AuslanderAlgebra:
    return AuslanderAlgebra(sub)


@dataclass(frozen=True)
class FunctorModule:
    gamma: AuslanderAlgebra = field(compare=False, hash=False)
    dims: tuple[int, ...]
    mats: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "mats", tuple(self.mats))
        arrows = self.gamma.arrows()
        if len(self.dims) != self.gamma.num_vertices or len(self.mats) != len(arrows):
            raise ValueError("functor data does not match the Auslander algebra")
        for (s, t), m in zip(arrows, self.mats):
            if (m.nrows, m.ncols) != (self.dims[t], self.dims[s]):
                raise ValueError("functor matrix has the wrong shape")

    def is_zero(self) -> bool:
        return not any(self.dims)

    def act(self, g: ModuleMap) -> Matrix:
        """``F(g)`` for any ``g: M_i -> M_j`` between members."""
        gm = self.gamma
        i = gm.sub.members.index(g.source)
        j = gm.sub.members.index(g.target)
        out = Matrix.zeros(self.dims[i], self.dims[j])
        for c, x in zip(gm.coordinates(g), gm.block_range(i, j)):
            if c:
                out = out + self.mats[x].scale(c)
        return out

    def validate(self) -> list[str]:
        """Functor laws: identities act trivially and ``F(g o h) = F(h) F(g)``."""
        gm = self.gamma
        errs = []
        for i in range(gm.num_vertices):
            if self.mats[gm.offset[(i, i)]] != Matrix.identity(self.dims[i]):
                errs.append(f"F(id) is not the identity at {gm.sub.names[i]}")
        for (x, y), prod in gm.table.mult.items():
            lhs = Matrix.zeros(self.mats[y].nrows, self.mats[x].ncols)
            for z, c in prod:
                lhs = lhs + self.mats[z].scale(c)
            if lhs != self.mats[y] @ self.mats[x]:
                errs.append(f"F fails composition on ({gm.table.label(x)}, {gm.table.label(y)})")
        return errs


@dataclass(frozen=True)
class FunctorMap:
    source: FunctorModule
    target: FunctorModule
    comps: tuple[Matrix, ...]

    def is_valid(self) -> bool:
        return _rep.is_morphism(self.source.gamma.arrows(), self.source.mats, self.target.mats, self.comps)


def zero_functor(gamma: AuslanderAlgebra) -> FunctorModule:
    return FunctorModule(gamma, [0] * gamma.num_vertices,
                         [Matrix.zeros(0, 0) for _ in gamma.elements])


def yoneda_module(x: Module, gamma: AuslanderAlgebra) -> FunctorModule:
    """``Hom(-, x)`` restricted to the members; ``F(g)`` is precomposition with g."""
    members = gamma.sub.members
    dims = [len(hom_basis(m, x)) for m in members]
    mats = []
    for i, j, g in gamma.elements:
        # Hom(M_j, x) -> Hom(M_i, x)
        hs = hom_space(members[i], x)
        cols = [hs.coordinates(phi @ g) for phi in hom_basis(members[j], x)]
        mats.append(Matrix.from_columns(cols, dims[i]))
    return FunctorModule(gamma, dims, mats)


def yoneda_map(f: ModuleMap, gamma: AuslanderAlgebra) -> FunctorMap:
    """``Hom(-, f)``: postcomposition with f."""
    src, tgt = yoneda_module(f.source, gamma), yoneda_module(f.target, gamma)
    comps = []
    for i, m in enumerate(gamma.sub.members):
        hs = hom_space(m, f.target)
        cols = [hs.coordinates(f @ phi) for phi in hom_basis(m, f.source)]
        comps.append(Matrix.from_columns(cols, tgt.dims[i]))
    return FunctorMap(src, tgt, tuple(comps))


def simple_functor(i: int, gamma: AuslanderAlgebra) -> FunctorModule:
    """The simple top of ``Hom(-, M_i)``: one-dimensional at M_i, radical acts by zero."""
    dims = [1 if k == i else 0 for k in range(gamma.num_vertices)]
    mats = []
    for x, (a, b, _) in enumerate(gamma.elements):
        mats.append(Matrix.identity(1) if x == gamma.offset[(i, i)] else Matrix.zeros(dims[a], dims[b]))
    return FunctorModule(gamma, dims, mats)


def nat_hom(f: FunctorModule, g: FunctorModule) -> list[tuple[Matrix, ...]]:
    """Basis of natural transformations ``f -> g``."""
    return _rep.hom_space(f.gamma.arrows(), f.dims, f.mats, g.dims, g.mats)


def functor_kernel(t: FunctorMap) -> tuple[FunctorModule, FunctorMap]:
    dims, mats, incl = _rep.kernel(t.source.gamma.arrows(), t.source.dims, t.source.mats, t.comps)
    k = FunctorModule(t.source.gamma, dims, mats)
    return k, FunctorMap(k, t.source, incl)


def functor_cokernel(t: FunctorMap) -> tuple[FunctorModule, FunctorMap]:
    dims, mats, proj = _rep.cokernel(t.target.gamma.arrows(), t.target.mats, t.comps)
    c = FunctorModule(t.target.gamma, dims, mats)
    return c, FunctorMap(t.target, c, proj)


def is_effaceable(f: FunctorModule, gamma: AuslanderAlgebra) -> bool:
    """Vanishes on every projective member."""
    return all(f.dims[i] == 0 for i in gamma.e)


def e_restrict(f: FunctorModule, gamma: AuslanderAlgebra) -> Module:
    """The A-module ``v -> F(P(v))``; an arrow from v to w acts by F of its image ``M_w -> M_v``."""
    alg = gamma.sub.algebra
    q = alg.quiver
    ident = gamma.projective_identification()
    dims = [f.dims[ident[v][0]] for v in range(q.num_vertices)]
    action = []
    for arrow in q.arrows:
        b = alg.index(q.path([arrow.label]))
        action.append(f.act(gamma.path_image(b, ident)))
    return Module(alg, dims, action)


def _span_rank(vectors: list[list[Fraction]]) -> int:
    if not vectors:
        return 0
    return rank(Matrix.from_columns(vectors, len(vectors[0])))


def _generators(f: FunctorModule) -> list[tuple[int, list[Fraction]]]:
    """A generating set of f: greedily keep standard basis vectors not in the span so far."""
    gm = f.gamma
    n = gm.num_vertices
    gens: list[tuple[int, list[Fraction]]] = []
    # generated[j] spans the part of F(M_j) reached so far
    generated: list[list[list[Fraction]]] = [[] for _ in range(n)]
    for i in range(n):
        for c in range(f.dims[i]):
            v = [ONE if r == c else ZERO for r in range(f.dims[i])]
            if _span_rank(generated[i] + [v]) == _span_rank(generated[i]):
                continue
            gens.append((i, v))
            for j in range(n):
                for x in gm.block_range(j, i):
                    generated[j].append(list(f.mats[x].apply(v)))
    return gens


@dataclass
class Presentation:
    """``Hom(-, Y) -> Hom(-, X) -> F -> 0`` realised by ``g: Y -> X`` in add(sub)."""

    g: ModuleMap
    generators: list[tuple[int, list[Fraction]]]

    @property
    def effaceable(self) -> bool:
        return self.g.is_surjective()


def presentation(f: FunctorModule) -> Presentation:
    gm = f.gamma
    members = gm.sub.members
    gens = _generators(f)
    if not gens:
        z = zero_module(gm.sub.algebra)
        return Presentation(zero_map(z, z), [])
    x, injs, projs = direct_sum([members[i] for i, _ in gens])
    yx = yoneda_module(x, gm)
    comps = []
    for j, mj in enumerate(members):
        cols = []
        for phi in hom_basis(mj, x):
            col = [ZERO] * f.dims[j]
            for (i, v), p in zip(gens, projs):
                w = f.act(p @ phi).apply(v)
                col = [a + b for a, b in zip(col, w)]
            cols.append(col)
        comps.append(Matrix.from_columns(cols, f.dims[j]))
    pi = FunctorMap(yx, f, tuple(comps))
    if not pi.is_valid():
        raise ArithmeticError("generator map is not natural")
    k, inc = functor_kernel(pi)
    kgens = _generators(k)
    if not kgens:
        z = zero_module(gm.sub.algebra)
        return Presentation(zero_map(z, x), gens)
    y, _, yprojs = direct_sum([members[j] for j, _ in kgens])
    g = zero_map(y, x)
    for (j, v), p in zip(kgens, yprojs):
        coords = inc.comps[j].apply(v)
        phi = zero_map(members[j], x)
        for c, b in zip(coords, hom_basis(members[j], x)):
            if c:
                phi = phi + b.scale(c)
        g = g + phi @ p
    return Presentation(g, gens)


def presentation_effaceable(f: FunctorModule) -> bool:
    """Effaceable in the presentation sense: presented by an epimorphism of A-modules."""
    return presentation(f).effaceable


# ---------------------------------------------------------------------------
# reports


def _evaluate(f: FunctorModule, h: ModuleMap, sub: Subcategory) -> Matrix:
    """``F(h): F(Y) -> F(X)`` for ``h: X -> Y`` in add(sub), via the summand decompositions."""
    xs = add_decompose(h.source, sub)
    ys = add_decompose(h.target, sub)
    rows = []
    for a in xs:
        blocks = [f.act(b.projection @ h @ a.inclusion) for b in ys]
        rows.append(blocks)
    if not xs:
        return Matrix.zeros(0, sum(f.dims[b.member] for b in ys))
    if not ys:
        return Matrix.zeros(sum(f.dims[a.member] for a in xs), 0)
    return Matrix.vstack([Matrix.hstack(r) for r in rows])


@dataclass
class SequenceCheck:
    index: int
    ok: bool
    position: int | None = None


def left_d_exactness_check(f: FunctorModule, sequences: Sequence[DSequence],
                           gamma: AuslanderAlgebra) -> list[SequenceCheck]:
    """Is ``0 -> F(X^{d+1}) -> ... -> F(X^1) -> F(X^0)`` exact except at the right end?"""
    out = []
    for n, seq in enumerate(sequences):
        mats = [_evaluate(f, m, gamma.sub) for m in seq.maps]  # mats[k]: F(X^{k+1}) -> F(X^k)
        dims = [sum(f.dims[s.member] for s in add_decompose(x, gamma.sub)) for x in seq.objects]
        ranks = [rank(m) for m in mats]
        top = len(seq.objects) - 1
        bad = None
        if ranks[top - 1] != dims[top]:
            bad = top
        else:
            for k in range(top - 1, 0, -1):
                if ranks[k] + ranks[k - 1] != dims[k] or not (mats[k - 1] @ mats[k]).is_zero():
                    bad = k
                    break
        out.append(SequenceCheck(n, bad is None, bad))
    return out


@dataclass
class EquivalenceReport:
    gamma_dim: int
    e: tuple[int, ...]
    e_dim: int
    algebra_dim: int
    matched: str | None
    gamma_hom: list[list[int]]
    module_hom: list[list[int]]
    restriction_ok: list[bool]
    failures: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return not self.failures


def match_structure_constants(gamma: AuslanderAlgebra) -> tuple[Matrix | None, str | None]:
    """Compare A with eGe under ``path p -> its left multiplication`` transported to the members.

    Returns the change-of-basis matrix (columns = Gamma coordinates of each path)
    and ``"A"`` or ``"A^op"`` for whichever multiplication it intertwines.
    """
    alg = gamma.sub.algebra
    ident = gamma.projective_identification()
    n = gamma.dim
    cols = []
    for b in range(alg.dim):
        img = gamma.path_image(b, ident)
        i = gamma.sub.members.index(img.source)
        j = gamma.sub.members.index(img.target)
        col = [ZERO] * n
        for c, x in zip(gamma.coordinates(img), gamma.block_range(i, j)):
            col[x] = c
        cols.append(col)
    t = Matrix.from_columns(cols, n)
    if rank(t) != alg.dim:
        return t, None

    def image(combo):
        out = [ZERO] * n
        for k, c in combo.items():
            for r in range(n):
                out[r] += c * cols[k][r]
        return out

    def gamma_product(u, v):
        out = {}
        ud = {r: c for r, c in enumerate(u) if c}
        vd = {r: c for r, c in enumerate(v) if c}
        prod = gamma.table.multiply(ud, vd)
        return [prod.get(r, ZERO) for r in range(n)]

    for side in ("A", "A^op"):
        ok = True
        for a in range(alg.dim):
            for b in range(alg.dim):
                lhs = image(dict(alg.product(a, b)))
                rhs = gamma_product(cols[a], cols[b]) if side == "A" else gamma_product(cols[b], cols[a])
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return t, side
    return t, None


def quotient_equivalence_report(sub: Subcategory, atlas, d: int, seed: int = 0) -> EquivalenceReport:
    """eGe against A, fully faithfulness of Yoneda, and restriction of representables."""
    from .tilting import is_d_cluster_tilting

    ct = is_d_cluster_tilting(sub, atlas, d, seed)
    if not ct.verdict:
        raise PreconditionError(f"the subcategory is not {d}-cluster tilting")
    gamma = build_auslander_algebra(sub)
    rep = EquivalenceReport(gamma.dim, gamma.e, gamma.e_dim(), sub.algebra.dim, None, [], [], [])
    diag = gamma.validate()
    if not diag.ok:
        rep.failures.extend(diag)
    if rep.e_dim != rep.algebra_dim:
        rep.failures.append(f"dim eGe = {rep.e_dim} but dim A = {rep.algebra_dim}")
    _, rep.matched = match_structure_constants(gamma)
    if rep.matched is None:
        rep.failures.append("structure constants of eGe match neither A nor A^op")
    ys = [yoneda_module(m, gamma) for m in sub.members]
    for a, (na, x) in enumerate(zip(sub.names, sub.members)):
        grow, mrow = [], []
        for b, y in enumerate(sub.members):
            gh, mh = len(nat_hom(ys[a], ys[b])), len(hom_basis(x, y))
            grow.append(gh)
            mrow.append(mh)
            if gh != mh:
                rep.failures.append(f"Hom({na}, {sub.names[b]}): {mh} in mod A, {gh} between functors")
        rep.gamma_hom.append(grow)
        rep.module_hom.append(mrow)
        ok = find_isomorphism(e_restrict(ys[a], gamma), x, seed) is not None
        rep.restriction_ok.append(ok)
        if not ok:
            rep.failures.append(f"restriction of Hom(-, {na}) is not isomorphic to {na}")
    return rep
