"""Linear algebra of quiver-shaped data shared by modules and functor modules.

A representation here is just ``dims`` (one per vertex) and ``mats`` (one per
arrow, shape ``dims[target] x dims[source]``) for a list of ``(source, target)``
arrows.  Morphisms are tuples of per-vertex matrices.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .linalg import ZERO, Matrix, cokernel_projection, kernel_basis, nullspace_sparse, solve_linear

Arrows = Sequence[tuple[int, int]]


def _offsets(dims_a, dims_b):
    offs = []
    n = 0
    for da, db in zip(dims_a, dims_b):
        offs.append(n)
        n += da * db
    return offs, n


def flatten(comps: Sequence[Matrix]) -> list[Fraction]:
    out = []
    for m in comps:
        for r in m.rows:
            out.extend(r)
    return out


def unflatten(vec: Sequence[Fraction], dims_a, dims_b) -> tuple[Matrix, ...]:
    comps = []
    pos = 0
    for da, db in zip(dims_a, dims_b):
        rows = [vec[pos + r * da: pos + (r + 1) * da] for r in range(db)]
        comps.append(Matrix(rows, ncols=da))
        pos += da * db
    return tuple(comps)


def hom_space(arrows: Arrows, dims_a, mats_a, dims_b, mats_b) -> list[tuple[Matrix, ...]]:
    """Basis of all vertex-wise maps ``f`` with ``f_t A(x) = B(x) f_s`` for each arrow."""
    offs, nvars = _offsets(dims_a, dims_b)
    eqs = []
    for k, (s, t) in enumerate(arrows):
        ma, mb = mats_a[k], mats_b[k]
        das, dbt = dims_a[s], dims_b[t]
        dat, dbs = dims_a[t], dims_b[s]
        if das == 0 or dbt == 0:
            continue
        for r in range(dbt):
            for c in range(das):
                row: dict[int, Fraction] = {}
                # (f_t A)[r, c] = sum_x f_t[r, x] A[x, c]
                for x in range(dat):
                    a = ma.rows[x][c]
                    if a:
                        idx = offs[t] + r * dat + x
                        row[idx] = row.get(idx, ZERO) + a
                # -(B f_s)[r, c] = -sum_y B[r, y] f_s[y, c]
                brow = mb.rows[r]
                for y in range(dbs):
                    b = brow[y]
                    if b:
                        idx = offs[s] + y * das + c
                        row[idx] = row.get(idx, ZERO) - b
                row = {i: v for i, v in row.items() if v}
                if row:
                    eqs.append(row)
    return [unflatten(v, dims_a, dims_b) for v in nullspace_sparse(eqs, nvars)]


def is_morphism(arrows: Arrows, mats_a, mats_b, comps) -> bool:
    return all(comps[t] @ mats_a[k] == mats_b[k] @ comps[s] for k, (s, t) in enumerate(arrows))


def kernel(arrows: Arrows, dims_a, mats_a, comps):
    """Vertex-wise kernel of a morphism out of ``(dims_a, mats_a)``.

    Returns ``(dims, mats, inclusion_comps)``.
    """
    incl = tuple(kernel_basis(c) for c in comps)
    dims = tuple(k.ncols for k in incl)
    mats = []
    for k, (s, t) in enumerate(arrows):
        x = solve_linear(incl[t], mats_a[k] @ incl[s])
        if x is None:
            raise ArithmeticError("kernel is not a subrepresentation; input was not a morphism")
        mats.append(x)
    return dims, tuple(mats), incl


def cokernel(arrows: Arrows, mats_b, comps):
    """Vertex-wise cokernel of a morphism into the representation ``mats_b``.

    Returns ``(dims, mats, projection_comps)``.
    """
    proj = tuple(cokernel_projection(c) for c in comps)
    sections = []
    for p in proj:
        sec = solve_linear(p, Matrix.identity(p.nrows))
        if sec is None:
            raise ArithmeticError("cokernel projection is not surjective")
        sections.append(sec)
    dims = tuple(p.nrows for p in proj)
    mats = tuple(proj[t] @ mats_b[k] @ sections[s] for k, (s, t) in enumerate(arrows))
    return dims, mats, proj
