"""Shared helpers for the test suite."""
from __future__ import annotations

import random

from higherhom.approximation import Subcategory, d_cokernel, d_kernel
from higherhom.modules import direct_sum, hom_basis, linear_combination, zero_map
from higherhom.problem import load_fixture


def fixture(name):
    return load_fixture(name)


def sample_objects(sub: Subcategory, mixed: bool = True):
    """``M_i``, ``M_i + M_i`` and (if ``mixed``) ``M_i + M_j`` for i < j.

    Every summand multiplicity is at most 2.
    """
    objs = []
    n = len(sub)
    for i in range(n):
        objs.append(((i,), sub.members[i]))
        objs.append(((i, i), direct_sum([sub.members[i]] * 2)[0]))
    for i in range(n if mixed else 0):
        for j in range(i + 1, n):
            objs.append(((i, j), direct_sum([sub.members[i], sub.members[j]])[0]))
    return objs


def sample_morphisms(sub: Subcategory, seed: int = 0, mixed: bool = True):
    """Zero map, every Hom basis element and one seeded random combination, for each pair of objects."""
    rng = random.Random(seed)
    out = []
    objs = sample_objects(sub, mixed)
    for ka, x in objs:
        for kb, y in objs:
            basis = hom_basis(x, y)
            out.append(((ka, kb, "zero"), zero_map(x, y)))
            for n, b in enumerate(basis):
                out.append(((ka, kb, f"basis{n}"), b))
            if len(basis) > 1:
                coeffs = [rng.randint(-3, 3) for _ in basis]
                out.append(((ka, kb, "random"), linear_combination(coeffs, basis, x, y)))
    return out


_SUITES = {}


def axiom_suite(sub: Subcategory, d: int, seed: int = 0, mixed: bool = True):
    """Run d_kernel and d_cokernel on every sampled morphism; returns (label, kind, sequence or exception)."""
    key = (sub.members, d, seed, mixed)
    if key in _SUITES:
        return _SUITES[key]
    results = []
    for label, f in sample_morphisms(sub, seed, mixed):
        for kind, build in (("dkernel", d_kernel), ("dcokernel", d_cokernel)):
            try:
                results.append((label, kind, build(f, sub, d)))
            except Exception as exc:  # recorded, judged by the caller
                results.append((label, kind, exc))
    _SUITES[key] = results
    return results


def axiom_sample_count(sub: Subcategory, seed: int = 0, mixed: bool = True) -> int:
    return len(sample_morphisms(sub, seed, mixed))
