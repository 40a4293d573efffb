"""Exact dense linear algebra over the rationals.

Every entry is a :class:`fractions.Fraction`; nothing here ever rounds.
Matrices are immutable and hashable so they can sit inside module records
and be used as cache keys.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they are not exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class Matrix:
    """An immutable ``nrows x ncols`` matrix of Fractions (row-major)."""

    __slots__ = ("nrows", "ncols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_scalar(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError(f"ragged row: expected {ncols} entries, got {len(r)}")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data
        self._hash = None

    @classmethod
    def _trusted(cls, rows: tuple, nrows: int, ncols: int) -> Matrix:
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        m._hash = None
        return m

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        row = (ZERO,) * ncols
        return cls._trusted((row,) * nrows, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        rows = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        return cls._trusted(rows, n, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> Matrix:
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(nrows)], ncols=len(cols))

    @classmethod
    def hstack(cls, blocks: Sequence[Matrix], nrows: int | None = None) -> Matrix:
        if not blocks:
            return cls.zeros(nrows or 0, 0)
        n = blocks[0].nrows
        if any(b.nrows != n for b in blocks):
            raise ValueError("hstack: row counts differ")
        rows = tuple(sum((b._rows[i] for b in blocks), ()) for i in range(n))
        return cls._trusted(rows, n, sum(b.ncols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence[Matrix], ncols: int | None = None) -> Matrix:
        if not blocks:
            return cls.zeros(0, ncols or 0)
        c = blocks[0].ncols
        if any(b.ncols != c for b in blocks):
            raise ValueError("vstack: column counts differ")
        rows = sum((b._rows for b in blocks), ())
        return cls._trusted(rows, len(rows), c)

    @classmethod
    def block_diag(cls, blocks: Sequence[Matrix]) -> Matrix:
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = []
        off = 0
        for b in blocks:
            left = (ZERO,) * off
            right = (ZERO,) * (nc - off - b.ncols)
            rows.extend(left + r + right for r in b._rows)
            off += b.ncols
        return cls._trusted(tuple(rows), nr, nc)

    # -- basic protocol ------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self._rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # -- arithmetic ----------------------------------------------------------

    @property
    def T(self) -> Matrix:
        if not self.nrows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._trusted(tuple(zip(*self._rows)), self.ncols, self.nrows)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        return Matrix._trusted(rows, self.nrows, self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix._trusted(tuple(tuple(-a for a in r) for r in self._rows), self.nrows, self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        c = to_scalar(c)
        return Matrix._trusted(tuple(tuple(c * a for a in r) for r in self._rows), self.nrows, self.ncols)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.ncols
        orows = other._rows
        out = []
        for r in self._rows:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    brow = orows[k]
                    for j in range(ocols):
                        b = brow[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._trusted(tuple(out), self.nrows, ocols)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError("vector length does not match ncols")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self._rows)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self._rows[i][i] for i in range(self.nrows)), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._trusted(
            tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(rows), len(cols)
        )

    # -- elimination-based ---------------------------------------------------

    def rref(self) -> tuple[Matrix, list[int]]:
        return rref(self)

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self) -> Matrix:
        return kernel_basis(self)

    def inverse(self) -> Matrix:
        return inverse(self)


# ---------------------------------------------------------------------------
# sparse Gauss-Jordan engine: rows are dicts {column: nonzero Fraction}


def _dense_to_sparse(m: Matrix) -> list[dict[int, Fraction]]:
    return [{j: x for j, x in enumerate(r) if x} for r in m.rows]


def rref_sparse(rows: Iterable[dict[int, Fraction]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Reduced row echelon form of a sparse row list.

    Returns ``[(pivot_column, row), ...]`` ordered by pivot column; each row
    has a 1 at its pivot and zeros at every other pivot column.
    """
    pending = [dict(r) for r in rows if r]
    done: list[tuple[int, dict[int, Fraction]]] = []
    while pending:
        col = min(min(r) for r in pending)
        best = None
        for idx, r in enumerate(pending):
            if col in r and (best is None or len(r) < len(pending[best])):
                best = idx
        prow = pending.pop(best)
        inv = 1 / prow[col]
        if inv != 1:
            prow = {j: x * inv for j, x in prow.items()}
        for group in (pending, [r for _, r in done]):
            for r in group:
                c = r.get(col)
                if c:
                    for j, x in prow.items():
                        y = r.get(j, ZERO) - c * x
                        if y:
                            r[j] = y
                        else:
                            r.pop(j, None)
        pending = [r for r in pending if r]
        done.append((col, prow))
    done.sort(key=lambda t: t[0])
    return done


def nullspace_sparse(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : row . x = 0 for all rows}`` as dense vectors, one per free column."""
    red = rref_sparse(rows)
    pivots = {c for c, _ in red}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for c, r in red:
            x = r.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    red = rref_sparse(_dense_to_sparse(m))
    rows = [tuple(r.get(j, ZERO) for j in range(m.ncols)) for _, r in red]
    rows += [(ZERO,) * m.ncols] * (m.nrows - len(rows))
    return Matrix._trusted(tuple(rows), m.nrows, m.ncols), [c for c, _ in red]


def rank(m: Matrix) -> int:
    return len(rref_sparse(_dense_to_sparse(m)))


def rank_of_vectors(vectors: Iterable[Sequence]) -> int:
    return len(rref_sparse({j: x for j, x in enumerate(v) if x} for v in vectors))


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space of ``m``."""
    basis = nullspace_sparse(_dense_to_sparse(m), m.ncols)
    return Matrix.from_columns(basis, m.ncols)


def image_basis(m: Matrix) -> Matrix:
    """Columns of ``m`` at the pivot positions: a basis of the column space."""
    _, piv = rref(m)
    return m.submatrix(range(m.nrows), piv)


def cokernel_projection(m: Matrix) -> Matrix:
    """A surjection ``Q`` with ``ker Q = im m`` (rows span the left null space)."""
    return kernel_basis(m.T).T


def solve_linear(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution ``x`` of ``a x = b`` or None when inconsistent.

    ``b`` may have several columns; each is solved independently (free
    variables set to zero).
    """
    if a.nrows != b.nrows:
        raise ValueError(f"dimension mismatch: a has {a.nrows} rows, b has {b.nrows}")
    n = a.ncols
    aug = Matrix.hstack([a, b]) if a.nrows else Matrix.zeros(0, n + b.ncols)
    red = rref_sparse(_dense_to_sparse(aug))
    sol = [[ZERO] * b.ncols for _ in range(n)]
    for c, r in red:
        if c >= n:
            return None
        for j in range(b.ncols):
            x = r.get(n + j)
            if x:
                sol[c][j] = x
    return Matrix(sol, ncols=b.ncols)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    x = solve_linear(m, Matrix.identity(m.nrows))
    if x is None or m @ x != Matrix.identity(m.nrows):
        raise ValueError("matrix is singular")
    return x


def extend_to_basis(sub: Matrix, n: int) -> list[int]:
    """Standard basis indices that complete the columns of ``sub`` to a basis of K^n."""
    vecs = [list(c) for c in sub.columns()]
    chosen = []
    r = rank_of_vectors(vecs)
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        r2 = rank_of_vectors(vecs + [e])
        if r2 > r:
            vecs.append(e)
            chosen.append(i)
            r = r2
    return chosen


def charpoly(m: Matrix) -> list[Fraction]:
    """Coefficients ``[c_n, ..., c_0]`` of ``det(xI - m)`` (leading 1).

    Faddeev-LeVerrier; exact because we are in characteristic 0.
    """
    n = m.nrows
    if not m.is_square():
        raise ValueError("charpoly of a non-square matrix")
    coeffs = [ONE]
    mk = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(coeffs[-1]))
        coeffs.append(-mk.trace() / k)
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], m: Matrix) -> Matrix:
    """Evaluate a polynomial (highest degree first) at a square matrix by Horner."""
    n = m.nrows
    acc = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for c in coeffs:
        acc = acc @ m + ident.scale(c)
    return acc
