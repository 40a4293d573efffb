"""Finite-dimensional modules over a bound quiver algebra as representations.

A :class:`Module` stores one vector space dimension per vertex and one matrix
per arrow (``target_dim x source_dim``).  With paths read in traversal order
these are right modules: a path ``p`` acts on ``M_{source(p)}`` by the product
of its arrow matrices, last arrow leftmost.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import _rep
from .linalg import ONE, ZERO, Matrix, extend_to_basis, image_basis, inverse, rank, rank_of_vectors, solve_linear
from .quiver import AlgebraTable, Diagnostics, Path, opposite_algebra


class Module:
    """A quiver representation satisfying (or, before validation, claiming) the relations."""

    __slots__ = ("algebra", "dims", "action", "name", "_parts", "_hash")

    def __init__(self, algebra: AlgebraTable, dims: Sequence[int], action: Sequence[Matrix], name: str = ""):
        q = algebra.quiver
        if q is None:
            raise ValueError("modules need an algebra presented by a quiver")
        dims = tuple(int(d) for d in dims)
        action = tuple(action)
        if len(dims) != q.num_vertices:
            raise ValueError(f"expected {q.num_vertices} dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise ValueError("dimensions must be non-negative")
        if len(action) != len(q.arrows):
            raise ValueError(f"expected {len(q.arrows)} arrow matrices, got {len(action)}")
        for a, m in zip(q.arrows, action):
            if m.shape != (dims[a.target], dims[a.source]):
                raise ValueError(
                    f"arrow {a.label} needs a {dims[a.target]}x{dims[a.source]} matrix, got {m.nrows}x{m.ncols}"
                )
        self.algebra = algebra
        self.dims = dims
        self.action = action
        self.name = name
        self._parts = None
        self._hash = None

    @classmethod
    def from_labels(cls, algebra: AlgebraTable, dims: Mapping, action: Mapping | None = None, name: str = "") -> Module:
        """Build from ``{vertex_label: dim}`` and ``{arrow_label: rows}``; missing arrows are zero."""
        q = algebra.quiver
        dv = [0] * q.num_vertices
        for v, d in dims.items():
            dv[q.vertex_index(v)] = d
        mats = []
        action = dict(action or {})
        for a in q.arrows:
            m = action.pop(a.label, None)
            if m is None:
                mats.append(Matrix.zeros(dv[a.target], dv[a.source]))
            else:
                mats.append(m if isinstance(m, Matrix) else Matrix(m, ncols=dv[a.source]))
        if action:
            raise KeyError(f"unknown arrows {sorted(action)}")
        return cls(algebra, dv, mats, name)

    @property
    def quiver(self):
        return self.algebra.quiver

    @property
    def arrows(self) -> list[tuple[int, int]]:
        return [(a.source, a.target) for a in self.algebra.quiver.arrows]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_vector(self) -> tuple[int, ...]:
        return self.dims

    def named(self, name: str) -> Module:
        m = Module(self.algebra, self.dims, self.action, name)
        m._parts = self._parts
        return m

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Module):
            return NotImplemented
        return self.dims == other.dims and self.action == other.action and self.algebra == other.algebra

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, self.dims, self.action))
        return self._hash

    def __repr__(self):
        label = self.name or "Module"
        return f"{label}{list(self.dims)}"


@dataclass(frozen=True, eq=True)
class ModuleMap:
    source: Module
    target: Module
    comps: tuple[Matrix, ...]

    def __post_init__(self):
        if self.source.algebra != self.target.algebra:
            raise ValueError("source and target live over different algebras")
        comps = tuple(self.comps)
        object.__setattr__(self, "comps", comps)
        for v, (c, ds, dt) in enumerate(zip(comps, self.source.dims, self.target.dims)):
            if c.shape != (dt, ds):
                raise ValueError(f"component at vertex {v} has shape {c.shape}, expected {(dt, ds)}")

    def is_valid(self) -> bool:
        return _rep.is_morphism(self.source.arrows, self.source.action, self.target.action, self.comps)

    def __matmul__(self, other: ModuleMap) -> ModuleMap:
        """Composition: ``(g @ f)(x) = g(f(x))``."""
        if other.target != self.source:
            raise ValueError("maps do not compose")
        return ModuleMap(other.source, self.target, tuple(a @ b for a, b in zip(self.comps, other.comps)))

    def __add__(self, other: ModuleMap) -> ModuleMap:
        return ModuleMap(self.source, self.target, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: ModuleMap) -> ModuleMap:
        return ModuleMap(self.source, self.target, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def scale(self, c) -> ModuleMap:
        return ModuleMap(self.source, self.target, tuple(m.scale(c) for m in self.comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def ranks(self) -> tuple[int, ...]:
        return tuple(rank(c) for c in self.comps)

    def is_injective(self) -> bool:
        return self.ranks() == self.source.dims

    def is_surjective(self) -> bool:
        return self.ranks() == self.target.dims

    def is_isomorphism(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def inverse(self) -> ModuleMap:
        if not self.is_isomorphism():
            raise ValueError("map is not invertible")
        return ModuleMap(self.target, self.source, tuple(inverse(c) for c in self.comps))

    def vector(self) -> list[Fraction]:
        return _rep.flatten(self.comps)


def identity_map(m: Module) -> ModuleMap:
    return ModuleMap(m, m, tuple(Matrix.identity(d) for d in m.dims))


def zero_map(m: Module, n: Module) -> ModuleMap:
    return ModuleMap(m, n, tuple(Matrix.zeros(b, a) for a, b in zip(m.dims, n.dims)))


def zero_module(alg: AlgebraTable) -> Module:
    q = alg.quiver
    return Module(alg, [0] * q.num_vertices, [Matrix.zeros(0, 0) for _ in q.arrows], "0")


def linear_combination(coeffs: Sequence, maps: Sequence[ModuleMap], source: Module, target: Module) -> ModuleMap:
    out = zero_map(source, target)
    for c, f in zip(coeffs, maps):
        if c:
            out = out + f.scale(c)
    return out


def direct_sum(mods: Sequence[Module], name: str = ""):
    """``(S, injections, projections)`` for the direct sum of ``mods``."""
    if not mods:
        raise ValueError("direct_sum of an empty list; use zero_module")
    alg = mods[0].algebra
    q = alg.quiver
    dims = [sum(m.dims[v] for m in mods) for v in range(q.num_vertices)]
    action = [Matrix.block_diag([m.action[k] for m in mods]) for k in range(len(q.arrows))]
    s = Module(alg, dims, action, name or " + ".join(m.name or "?" for m in mods))
    s._parts = tuple(mods)
    inj, proj = [], []
    offs = [0] * q.num_vertices
    for m in mods:
        ic, pc = [], []
        for v in range(q.num_vertices):
            d, tot, o = m.dims[v], dims[v], offs[v]
            rows = [[ONE if (r == o + c) else ZERO for c in range(d)] for r in range(tot)]
            i_v = Matrix(rows, ncols=d)
            ic.append(i_v)
            pc.append(i_v.T)
            offs[v] += d
        inj.append(ModuleMap(m, s, tuple(ic)))
        proj.append(ModuleMap(s, m, tuple(pc)))
    return s, inj, proj


def direct_power(m: Module, k: int) -> Module:
    if k == 0:
        return zero_module(m.algebra)
    return direct_sum([m] * k, name=f"{m.name}^{k}" if k > 1 else m.name)[0]


def path_action(m: Module, p: Path) -> Matrix:
    out = Matrix.identity(m.dims[p.source])
    for ai in p.arrows:
        out = m.action[ai] @ out
    return out


def validate_module(m: Module) -> Diagnostics:
    """Confirm every relation of the algebra evaluates to zero on ``m``."""
    diag = Diagnostics()
    q = m.quiver
    for rel in m.algebra.relations:
        if not rel:
            continue
        s, t = rel[0][1].source, rel[0][1].target
        total = Matrix.zeros(m.dims[t], m.dims[s])
        for c, p in rel:
            total = total + path_action(m, p).scale(c)
        if not total.is_zero():
            text = " + ".join(f"{c}*{q.path_name(p)}" for c, p in rel)
            diag.append(f"relation {text} = 0 fails on {m.name or 'module'}")
    return diag


# ---------------------------------------------------------------------------
# Hom


def _check_same_algebra(m: Module, n: Module):
    if m.algebra != n.algebra:
        raise ValueError("modules live over different algebras")


@lru_cache(maxsize=None)
def hom_basis(m: Module, n: Module) -> tuple[ModuleMap, ...]:
    """Basis of Hom(m, n) from the intertwining equations (deterministic order)."""
    _check_same_algebra(m, n)
    sols = _rep.hom_space(m.arrows, m.dims, m.action, n.dims, n.action)
    return tuple(ModuleMap(m, n, c) for c in sols)


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


class HomSpace:
    """Hom(m, n) with coordinates relative to :func:`hom_basis`."""

    def __init__(self, m: Module, n: Module):
        self.source = m
        self.target = n
        self.basis = hom_basis(m, n)
        vecs = [b.vector() for b in self.basis]
        self._vecs = vecs
        k = len(vecs)
        if k:
            rows_t = Matrix(vecs)  # k x N, rows are basis vectors
            _, piv = rows_t.rref()
            self._rows = piv
            square = rows_t.submatrix(range(k), piv)  # k x k, invertible
            self._inv = inverse(square)
        else:
            self._rows = []
            self._inv = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: ModuleMap) -> list[Fraction]:
        if f.source != self.source or f.target != self.target:
            raise ValueError("map is not in this Hom space")
        vec = f.vector()
        if not self.basis:
            if any(vec):
                raise ValueError("map is not a homomorphism")
            return []
        picked = [vec[i] for i in self._rows]
        coeffs = list(Matrix([picked]).__matmul__(self._inv).rows[0])
        recon = [sum((c * b[i] for c, b in zip(coeffs, self._vecs) if c), ZERO) for i in range(len(vec))]
        if recon != vec:
            raise ValueError("map is not a homomorphism")
        return coeffs

    def element(self, coeffs: Sequence) -> ModuleMap:
        return linear_combination(coeffs, self.basis, self.source, self.target)


@lru_cache(maxsize=None)
def hom_space(m: Module, n: Module) -> HomSpace:
    return HomSpace(m, n)


def rank_of_maps(maps: Sequence[ModuleMap]) -> int:
    return rank_of_vectors(f.vector() for f in maps)


# ---------------------------------------------------------------------------
# projectives, injectives, simples, duality


@lru_cache(maxsize=None)
def std_projective(alg: AlgebraTable, vertex: int) -> Module:
    """The right ideal ``e_v A``: basis the paths starting at ``vertex``."""
    q = alg.quiver
    at = [[i for i in alg.paths_from(vertex) if alg.basis[i].target == k] for k in range(q.num_vertices)]
    pos = [{b: r for r, b in enumerate(at[k])} for k in range(q.num_vertices)]
    mats = []
    for ai, a in enumerate(q.arrows):
        arrow_idx = alg.index(Path(a.source, a.target, (ai,)))
        cols = []
        for p in at[a.source]:
            col = [ZERO] * len(at[a.target])
            for k, c in alg.product(p, arrow_idx):
                col[pos[a.target][k]] += c
            cols.append(col)
        mats.append(Matrix.from_columns(cols, len(at[a.target])))
    return Module(alg, [len(x) for x in at], mats, f"P{q.vertices[vertex]}")


def projective_basis_paths(alg: AlgebraTable, vertex: int, k: int) -> list[int]:
    """Basis indices spanning ``std_projective(alg, vertex)`` at vertex ``k``, in order."""
    return [i for i in alg.paths_from(vertex) if alg.basis[i].target == k]


def std_injective(alg: AlgebraTable, vertex: int) -> Module:
    """Dual of the opposite algebra's projective at ``vertex``."""
    op = opposite_algebra(alg)
    m = dualize(std_projective(op, vertex), over=alg)
    return m.named(f"I{alg.quiver.vertices[vertex]}")


def simple_module(alg: AlgebraTable, vertex: int) -> Module:
    q = alg.quiver
    dims = [1 if v == vertex else 0 for v in range(q.num_vertices)]
    return Module(alg, dims, [Matrix.zeros(dims[a.target], dims[a.source]) for a in q.arrows], f"S{q.vertices[vertex]}")


def dualize(m: Module, over: AlgebraTable | None = None) -> Module:
    """``Hom_K(m, K)`` as a module over the opposite algebra (actions transposed)."""
    alg = over if over is not None else opposite_algebra(m.algebra)
    if alg != opposite_algebra(m.algebra):
        raise ValueError("dual must live over the opposite algebra")
    return Module(alg, m.dims, [a.T for a in m.action], f"D({m.name})" if m.name else "")


def dualize_map(f: ModuleMap, over: AlgebraTable | None = None) -> ModuleMap:
    return ModuleMap(dualize(f.target, over), dualize(f.source, over), tuple(c.T for c in f.comps))


# ---------------------------------------------------------------------------
# kernels, cokernels


def map_kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    m = f.source
    dims, mats, incl = _rep.kernel(m.arrows, m.dims, m.action, f.comps)
    k = Module(m.algebra, dims, mats, f"ker({m.name})" if m.name else "")
    return k, ModuleMap(k, m, incl)


def map_cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    n = f.target
    dims, mats, proj = _rep.cokernel(n.arrows, n.action, f.comps)
    c = Module(n.algebra, dims, mats, f"coker({n.name})" if n.name else "")
    return c, ModuleMap(n, c, proj)


def map_image(f: ModuleMap) -> tuple[Module, ModuleMap]:
    """Image as a submodule of the target, with its inclusion."""
    n = f.target
    cols = tuple(image_basis(c) for c in f.comps)
    mats = []
    for k, (s, t) in enumerate(n.arrows):
        x = solve_linear(cols[t], n.action[k] @ cols[s])
        mats.append(x)
    im = Module(n.algebra, [c.ncols for c in cols], mats)
    return im, ModuleMap(im, n, cols)


# ---------------------------------------------------------------------------
# projective covers and resolutions


@dataclass
class Cover:
    module: Module
    map: ModuleMap
    vertices: tuple[int, ...]  # vertex of each indecomposable projective summand, in order


def top_generators(m: Module) -> list[tuple[int, int]]:
    """``(vertex, standard basis index)`` pairs spanning a complement of the radical."""
    gens = []
    for v in range(len(m.dims)):
        incoming = [m.action[k] for k, (s, t) in enumerate(m.arrows) if t == v]
        if incoming and m.dims[v]:
            rad = image_basis(Matrix.hstack(incoming))
        else:
            rad = Matrix.zeros(m.dims[v], 0)
        gens.extend((v, i) for i in extend_to_basis(rad, m.dims[v]))
    return gens


def _cover(m: Module) -> Cover:
    if m.is_zero():
        raise ValueError("the zero module has no projective cover")
    alg = m.algebra
    gens = top_generators(m)
    summands = [std_projective(alg, v) for v, _ in gens]
    p, _, _ = direct_sum(summands)
    nv = len(m.dims)
    comps = []
    for k in range(nv):
        cols = []
        for v, i in gens:
            for b in projective_basis_paths(alg, v, k):
                cols.append(path_action(m, alg.basis[b]).column(i))
        comps.append(Matrix.from_columns(cols, m.dims[k]))
    return Cover(p, ModuleMap(p, m, tuple(comps)), tuple(v for v, _ in gens))


def projective_cover(m: Module) -> tuple[Module, ModuleMap]:
    c = _cover(m)
    return c.module, c.map


def is_projective(m: Module) -> bool:
    if m.is_zero():
        return True
    return _cover(m).module.dims == m.dims


def is_injective(m: Module) -> bool:
    return is_projective(dualize(m))


@dataclass
class Resolution:
    """``... -> modules[1] -> modules[0] -> augmentation.target``.

    ``maps[i]`` goes from ``modules[i + 1]`` to ``modules[i]``; ``complete``
    means the leftmost map is injective (the resolution has terminated).
    """

    modules: list[Module]
    maps: list[ModuleMap]
    augmentation: ModuleMap
    complete: bool = True
    covers: list[Cover] = field(default_factory=list, repr=False)

    @property
    def length(self) -> int:
        return max(len(self.modules) - 1, 0)

    def check_exact(self) -> Diagnostics:
        """Rank checks at every vertex: complex, exact at interior points, ends."""
        diag = Diagnostics()
        x = self.augmentation.target
        if not self.modules:
            if not x.is_zero():
                diag.append("empty resolution of a nonzero module")
            return diag
        chain = [self.augmentation] + list(self.maps)
        for i in range(len(chain) - 1):
            if not (chain[i] @ chain[i + 1]).is_zero():
                diag.append(f"composite at position {i} is not zero")
        if not self.augmentation.is_surjective():
            diag.append("augmentation is not surjective")
        for i in range(len(chain) - 1):
            # exactness at modules[i]: rank(in) = dim - rank(out)
            r_out, r_in = chain[i].ranks(), chain[i + 1].ranks()
            dims = chain[i].source.dims
            if any(a + b != d for a, b, d in zip(r_out, r_in, dims)):
                diag.append(f"not exact at position {i}")
        if self.complete and not chain[-1].is_injective():
            diag.append("leftmost map is not injective")
        return diag


def projective_resolution(m: Module, length: int) -> Resolution:
    """Minimal projective resolution up to ``modules[length]`` (or until it stops)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if m.is_zero():
        return Resolution([], [], zero_map(m, m), True)
    c0 = _cover(m)
    mods, maps, covers = [c0.module], [], [c0]
    k, inc = map_kernel(c0.map)
    for _ in range(length):
        if k.is_zero():
            break
        c = _cover(k)
        maps.append(inc @ c.map)
        mods.append(c.module)
        covers.append(c)
        k, inc = map_kernel(c.map)
    return Resolution(mods, maps, c0.map, k.is_zero(), covers)


@lru_cache(maxsize=None)
def ext_dim(m: Module, n: Module, i: int) -> int:
    """dim Ext^i(m, n) from a minimal projective resolution of ``m``."""
    if i < 0:
        raise ValueError("i must be >= 0")
    _check_same_algebra(m, n)
    if i == 0:
        return hom_dim(m, n)
    res = projective_resolution(m, i + 1)
    if len(res.modules) <= i:
        return 0
    here = hom_basis(res.modules[i], n)
    if not here:
        return 0
    if i < len(res.maps):
        d_next = res.maps[i]
        rank_out = rank_of_maps([phi @ d_next for phi in here])
    else:
        rank_out = 0
    d_in = res.maps[i - 1]
    rank_in = rank_of_maps([phi @ d_in for phi in hom_basis(res.modules[i - 1], n)])
    return len(here) - rank_out - rank_in


# ---------------------------------------------------------------------------
# transpose and Auslander-Reiten translate


def left_multiplication(alg: AlgebraTable, v: int, w: int, element: Mapping[int, Fraction]) -> ModuleMap:
    """``x -> b x`` from P(v) to P(w) for ``b`` a combination of paths from ``w`` to ``v``."""
    pv, pw = std_projective(alg, v), std_projective(alg, w)
    for b in element:
        p = alg.basis[b]
        if (p.source, p.target) != (w, v):
            raise ValueError("element does not lie in e_w A e_v")
    comps = []
    for k in range(alg.quiver.num_vertices):
        src = projective_basis_paths(alg, v, k)
        tgt = projective_basis_paths(alg, w, k)
        pos = {b: r for r, b in enumerate(tgt)}
        cols = []
        for x in src:
            col = [ZERO] * len(tgt)
            for b, c in element.items():
                for y, d in alg.product(b, x):
                    col[pos[y]] += c * d
            cols.append(col)
        comps.append(Matrix.from_columns(cols, len(tgt)))
    return ModuleMap(pv, pw, tuple(comps))


def _generator_position(alg: AlgebraTable, vertex: int) -> int:
    return projective_basis_paths(alg, vertex, vertex).index(alg.idempotents[vertex])


def transpose(m: Module) -> Module:
    """Auslander-Bridger transpose: cokernel of Hom(P1 -> P0, A) over the opposite algebra."""
    alg = m.algebra
    op = opposite_algebra(alg)
    if m.is_zero():
        return zero_module(op)
    c0 = _cover(m)
    k, inc = map_kernel(c0.map)
    if k.is_zero():
        return zero_module(op)
    c1 = _cover(k)
    d1 = inc @ c1.map
    v0, v1 = c0.vertices, c1.vertices
    p0_parts = [std_projective(alg, v) for v in v0]
    # offsets of each P0 summand inside P0 at every vertex
    nv = alg.quiver.num_vertices
    offs0 = []
    run = [0] * nv
    for p in p0_parts:
        offs0.append(list(run))
        for x in range(nv):
            run[x] += p.dims[x]
    run = [0] * nv
    offs1 = []
    for w in v1:
        part = std_projective(alg, w)
        offs1.append(list(run))
        for x in range(nv):
            run[x] += part.dims[x]
    src_parts = [std_projective(op, v) for v in v0]
    tgt_parts = [std_projective(op, w) for w in v1]
    src, _, src_proj = direct_sum(src_parts)
    tgt, tgt_inj, _ = direct_sum(tgt_parts)
    total = zero_map(src, tgt)
    for s, w in enumerate(v1):
        col = d1.comps[w].column(offs1[s][w] + _generator_position(alg, w))
        for t, v in enumerate(v0):
            paths = projective_basis_paths(alg, v, w)
            element = {}
            for r, b in enumerate(paths):
                x = col[offs0[t][w] + r]
                if x:
                    element[op.index(alg.basis[b].reversed())] = x
            if element:
                lam = left_multiplication(op, v, w, element)
                total = total + tgt_inj[s] @ lam @ src_proj[t]
    tr, _ = map_cokernel(total)
    return tr.named(f"Tr({m.name})" if m.name else "")


def tau(m: Module) -> Module | None:
    """Auslander-Reiten translate D Tr; None when ``m`` is projective."""
    from .decomposition import is_indecomposable

    if m.is_zero() or not is_indecomposable(m):
        raise ValueError("tau expects an indecomposable module")
    tr = transpose(m)
    if tr.is_zero():
        return None
    return dualize(tr, over=m.algebra).named(f"tau({m.name})" if m.name else "")


def tau_inverse(m: Module) -> Module | None:
    """Tr D; None when ``m`` is injective."""
    from .decomposition import is_indecomposable

    if m.is_zero() or not is_indecomposable(m):
        raise ValueError("tau_inverse expects an indecomposable module")
    tr = transpose(dualize(m))
    if tr.is_zero():
        return None
    return tr.named(f"tau^-1({m.name})" if m.name else "")
