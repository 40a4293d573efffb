from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higherhom.quiver import (
    AlgebraError,
    Quiver,
    build_algebra,
    make_relation,
    opposite_algebra,
    validate_algebra,
)


def labels(alg):
    return [alg.label(i) for i in range(alg.dim)]


def test_fixture_algebras(a2, n3):
    assert labels(a2.algebra) == ["e1", "e2", "a"]
    assert labels(n3.algebra) == ["e1", "e2", "e3", "a", "b"]
    assert validate_algebra(n3.algebra).ok


def test_ground_field():
    alg = build_algebra(Quiver.from_labels([1], []), [], 4)
    assert labels(alg) == ["e1"] and validate_algebra(alg).ok


def test_commutative_square():
    q = Quiver.from_labels([1, 2, 3, 4], [("a", 1, 2), ("b", 1, 3), ("c", 2, 4), ("d", 3, 4)])
    rel = make_relation([(1, q.path(["a", "c"])), (-1, q.path(["b", "d"]))])
    alg = build_algebra(q, [rel], 4)
    assert alg.dim == 9 and validate_algebra(alg).ok
    # b.d rewrites to a.c, so the product b * d is the basis element a.c
    b, d, ac = (alg.index(q.path(x)) for x in (["b"], ["d"], ["a", "c"]))
    assert alg.product(b, d) == ((ac, 1),)


def test_rejects_infinite_dimensional():
    q = Quiver.from_labels([1], [("x", 1, 1)])
    with pytest.raises(AlgebraError, match="irreducible"):
        build_algebra(q, [], 5)
    alg = build_algebra(q, [make_relation([(1, q.path(["x", "x", "x"]))])], 5)
    assert alg.dim == 3


def test_rejects_non_confluent():
    q = Quiver.from_labels([1], [("x", 1, 1), ("y", 1, 1)])
    p = lambda s: q.path(s.split("."))  # noqa: E731
    rels = [make_relation([(1, p("x.y")), (-1, p("x.x"))]),
            make_relation([(1, p("y.y"))]),
            make_relation([(1, p("x.x.x.x"))])]
    with pytest.raises(AlgebraError) as err:
        build_algebra(q, rels, 6)
    assert err.value.pair is not None


def test_relation_shape_errors():
    q = Quiver.from_labels([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)])
    with pytest.raises(AlgebraError):
        make_relation([(1, q.path(["a", "b"])), (1, q.path(["a"]))])
    with pytest.raises(AlgebraError):
        make_relation([(1, q.path(["c"]))])


def test_opposite(a2, n3):
    op = opposite_algebra(a2.algebra)
    assert op.dim == 3 and labels(op) == ["e1", "e2", "a"]
    a = op.basis[op.index(op.quiver.path(["a"]))]
    assert (a.source, a.target) == (1, 0)  # the arrow now runs 2 -> 1
    alg = n3.algebra
    assert opposite_algebra(opposite_algebra(alg)) == alg
    op = opposite_algebra(alg)
    for x in range(alg.dim):
        for y in range(alg.dim):
            rx, ry = (op.index(alg.basis[i].reversed()) for i in (x, y))
            want = {op.index(alg.basis[k].reversed()): c for k, c in alg.product(y, x)}
            assert dict(op.product(rx, ry)) == want
    assert validate_algebra(op).ok


def test_planted_defects(n3):
    alg = n3.algebra
    e1 = alg.idempotents[0]
    broken = alg.with_product(e1, e1, {})
    diag = validate_algebra(broken)
    assert any("idempotent failure at e1" in m for m in diag)
    a, b = alg.index(n3.quiver.path(["a"])), alg.index(n3.quiver.path(["b"]))
    e2 = alg.idempotents[1]
    broken = alg.with_product(a, e2, {a: F(2)})
    diag = validate_algebra(broken)
    assert not diag.ok and any("failure" in m for m in diag)
    broken = alg.with_product(a, b, {a: F(1)})
    diag = validate_algebra(broken)
    assert any("associativity failure on (" in m for m in diag)


def _count_paths(n, edges):
    # number of paths (including trivial ones) in an acyclic quiver with edges i -> j, i < j
    ending = [1] * n
    for j in range(n):
        ending[j] += sum(ending[i] for i, k in edges if k == j)
    return sum(ending)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                                             .filter(lambda e: e[0] < e[1]), max_size=6))))
def test_acyclic_dimension_is_path_count(data):
    n, edges = data
    q = Quiver.from_labels(list(range(1, n + 1)),
                           [(f"x{k}", i + 1, j + 1) for k, (i, j) in enumerate(edges)])
    alg = build_algebra(q, [], n + 1)
    assert alg.dim == _count_paths(n, edges)
    assert validate_algebra(alg).ok
