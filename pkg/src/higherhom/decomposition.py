"""Krull-Schmidt decomposition, indecomposability and isomorphism certificates.

Splitting follows the usual "chop" idea: draw a random endomorphism, factor
its characteristic polynomial over Q, and split the module into the
generalised eigenspaces of coprime factors (each is a submodule since the
endomorphism commutes with the action).
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import sympy

from .linalg import Matrix, charpoly, poly_eval, rank
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    hom_basis,
    hom_space,
    identity_map,
    linear_combination,
    map_kernel,
)

RETRY_BUDGET = 25
_COEFFS = (-2, -1, 0, 0, 0, 1, 1, 2, 3)
_X = sympy.Symbol("x")


class DecompositionError(RuntimeError):
    """The random splitting strategy ran out of attempts."""


def _endomorphism_structure(m: Module):
    """Basis of End(m) and its left-regular matrices ``L[i]`` (column j = coords of b_i b_j)."""
    basis = hom_basis(m, m)
    hs = hom_space(m, m)
    n = len(basis)
    lmats = []
    for bi in basis:
        cols = [hs.coordinates(bi @ bj) for bj in basis]
        lmats.append(Matrix.from_columns(cols, n))
    return basis, lmats


@lru_cache(maxsize=None)
def trace_form(m: Module) -> Matrix:
    """``T[i][j] = trace(L_{b_i} L_{b_j})`` on the basis of End(m)."""
    _, lmats = _endomorphism_structure(m)
    n = len(lmats)
    return Matrix([[(lmats[i] @ lmats[j]).trace() for j in range(n)] for i in range(n)], ncols=n)


def endomorphism_radical(m: Module) -> list[ModuleMap]:
    """Basis of rad End(m): in characteristic 0 it is the kernel of the trace form."""
    basis = hom_basis(m, m)
    ker = trace_form(m).kernel_basis()
    return [linear_combination(col, basis, m, m) for col in ker.columns()]


def is_indecomposable(m: Module, seed: int = 0) -> bool:
    """True iff End(m) is local with residue field Q (radical of codimension 1)."""
    if m.is_zero():
        raise ValueError("the zero module is neither decomposable nor indecomposable")
    return rank(trace_form(m)) == 1


def _random_combination(rng: random.Random, maps, source, target, sparse: bool = True) -> ModuleMap:
    pool = _COEFFS if sparse else tuple(c for c in range(-4, 5) if c)
    coeffs = [rng.choice(pool) for _ in maps]
    if not any(coeffs) and coeffs:
        coeffs[rng.randrange(len(coeffs))] = 1
    return linear_combination(coeffs, maps, source, target)


def find_isomorphism(m: Module, n: Module, seed: int = 0, tries: int = RETRY_BUDGET) -> ModuleMap | None:
    """An invertible map ``m -> n`` if one is found, else None ("not proven isomorphic")."""
    if m.algebra != n.algebra or m.dims != n.dims:
        return None
    if m.is_zero():
        return ModuleMap(m, n, tuple(Matrix.zeros(0, 0) for _ in m.dims))
    basis = hom_basis(m, n)
    if not basis:
        return None
    for b in basis:
        if b.is_isomorphism():
            return b
    rng = random.Random(seed)
    for _ in range(tries):
        f = _random_combination(rng, basis, m, n, sparse=False)
        if f.is_isomorphism():
            return f
    return None


def is_isomorphic(m: Module, n: Module, seed: int = 0) -> bool:
    return find_isomorphism(m, n, seed) is not None


def _factor(coeffs: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], _X, domain="QQ")
    _, factors = sympy.factor_list(poly)
    out = []
    for f, e in factors:
        f = f.monic()
        out.append(([Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()], e))
    return out


def _fitting_pieces(m: Module, phi: ModuleMap) -> list[tuple[Module, ModuleMap]]:
    """Generalised eigenspace decomposition of ``phi`` grouped by irreducible factor."""
    mult: dict[tuple, int] = {}
    for c in phi.comps:
        if c.nrows == 0:
            continue
        for f, e in _factor(charpoly(c)):
            key = tuple(f)
            mult[key] = mult.get(key, 0) + e
    if len(mult) < 2:
        return []
    pieces = []
    for f, e in mult.items():
        power = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in f], _X, domain="QQ") ** e
        pc = [Fraction(int(c.p), int(c.q)) for c in power.all_coeffs()]
        psi = ModuleMap(m, m, tuple(poly_eval(pc, c) for c in phi.comps))
        w, inc = map_kernel(psi)
        if not w.is_zero():
            pieces.append((w, inc))
    return pieces


def split(m: Module, seed: int = 0) -> list[tuple[Module, ModuleMap]]:
    """Indecomposable summands of ``m`` with their inclusions into ``m``."""
    rng = random.Random(seed)

    def rec(x: Module) -> list[tuple[Module, ModuleMap]]:
        if x.is_zero():
            return []
        if is_indecomposable(x):
            return [(x, identity_map(x))]
        basis = hom_basis(x, x)
        for _ in range(RETRY_BUDGET):
            phi = _random_combination(rng, basis, x, x)
            pieces = _fitting_pieces(x, phi)
            if len(pieces) >= 2:
                out = []
                for w, inc in pieces:
                    out.extend((u, inc @ j) for u, j in rec(w))
                return out
        raise DecompositionError(
            f"no splitting endomorphism found for {x!r} after {RETRY_BUDGET} random draws"
        )

    parts = rec(m)
    if parts:
        total, _, _ = direct_sum([u for u, _ in parts])
        iso = ModuleMap(total, m, tuple(
            Matrix.hstack([inc.comps[v] for _, inc in parts]) for v in range(len(m.dims))
        ))
        if not iso.is_isomorphism():
            raise DecompositionError("summands do not recombine to the original module")
    return parts


def decompose(m: Module, seed: int = 0) -> list[tuple[Module, int]]:
    """Indecomposable summands up to isomorphism with multiplicities."""
    groups: list[list] = []
    for u, _ in split(m, seed):
        for g in groups:
            if find_isomorphism(g[0], u, seed) is not None:
                g[1] += 1
                break
        else:
            groups.append([u, 1])
    return [(u, k) for u, k in groups]


def same_summands(a: list[tuple[Module, int]], b: list[tuple[Module, int]], seed: int = 0) -> bool:
    """Compare two decompositions as multisets up to isomorphism."""
    if len(a) != len(b):
        return False
    used = set()
    for u, k in a:
        for j, (w, l) in enumerate(b):
            if j not in used and k == l and find_isomorphism(u, w, seed) is not None:
                used.add(j)
                break
        else:
            return False
    return True


__all__ = [
    "DecompositionError",
    "decompose",
    "endomorphism_radical",
    "find_isomorphism",
    "is_indecomposable",
    "is_isomorphic",
    "same_summands",
    "split",
    "trace_form",
]
