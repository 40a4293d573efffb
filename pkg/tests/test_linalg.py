from fractions import Fraction as F

import pytest

from higherhom.linalg import (
    Matrix,
    charpoly,
    extend_to_basis,
    inverse,
    kernel_basis,
    poly_eval,
    rank,
    rref,
    solve_linear,
    to_scalar,
)


def M(rows, ncols=None):
    return Matrix(rows, ncols=ncols)


def test_rref_examples():
    assert rref(Matrix.identity(2)) == (Matrix.identity(2), [0, 1])
    assert rref(M([[1, 2], [2, 4]])) == (M([[1, 2], [0, 0]]), [0])
    assert rref(M([[0, 1], [1, 0]])) == (Matrix.identity(2), [0, 1])


def test_rref_idempotent_and_fractions():
    m = M([[2, 4, 1], [1, 3, F(1, 2)]])
    r, piv = rref(m)
    assert rref(r) == (r, piv)
    assert r.rows[0][0] == 1 and isinstance(r.rows[1][2], F)


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)).ncols == 0
    k = kernel_basis(M([[1, 1]]))
    assert k.ncols == 1 and k.rows[0][0] == -k.rows[1][0] != 0
    k = kernel_basis(M([[1, 2], [2, 4]]))
    assert k.ncols == 1 and k.rows[0][0] == -2 * k.rows[1][0]


def test_solve_examples():
    b = M([[3], [F(-1, 7)]])
    assert solve_linear(Matrix.identity(2), b) == b
    x = solve_linear(M([[1, 1]]), M([[2]]))
    assert x.rows[0][0] + x.rows[1][0] == 2
    assert solve_linear(M([[1], [2]]), M([[1], [1]])) is None
    with pytest.raises(ValueError):
        solve_linear(M([[1], [2]]), M([[1]]))


def test_empty_shapes():
    z = Matrix.zeros(0, 3)
    assert rank(z) == 0 and kernel_basis(z).ncols == 3
    assert (Matrix.zeros(2, 0) @ Matrix.zeros(0, 4)) == Matrix.zeros(2, 4)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        to_scalar(0.5)
    with pytest.raises(TypeError):
        M([[0.5]])


def test_inverse_and_basis_extension():
    m = M([[2, 1], [1, 1]])
    assert m @ inverse(m) == Matrix.identity(2)
    with pytest.raises(ValueError):
        inverse(M([[1, 2], [2, 4]]))
    sub = M([[1], [1], [0]])
    extra = extend_to_basis(sub, 3)
    assert rank(Matrix.hstack([sub] + [Matrix.identity(3).submatrix(range(3), [i]) for i in extra])) == 3


def test_charpoly_cayley_hamilton():
    m = M([[1, 2, 0], [0, 1, F(1, 3)], [4, 0, -1]])
    c = charpoly(m)
    # trace 1, det 5/3 by cofactor expansion
    assert c[0] == 1 and c[1] == -1 and c[3] == F(-5, 3)
    assert poly_eval(c, m).is_zero()
    assert charpoly(Matrix.identity(2)) == [1, -2, 1]
