"""Dense exact linear algebra over Q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, lcm
from typing import Iterable, Sequence

import gmpy2

from .poly import Scalar, scalar

MAX_MINOR_SCAN = 16


class RankError(ValueError):
    pass


class Matrix:
    """Immutable rectangular matrix of exact rationals."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(scalar(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer the column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(r[j] for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({[[str(v) for v in r] for r in self.rows]})"

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows), self.nrows) if self.rows else Matrix([], 0)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.transpose().rows if other.rows else ()
            return Matrix(
                [[_dot(r, c) for c in cols] for r in self.rows] if cols else [[] for _ in self.rows],
                other.ncols,
            )
        vec = [scalar(v) for v in other]
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        return tuple(_dot(r, vec) for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def is_zero(self) -> bool:
        return all(not v for r in self.rows for v in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix([r + s for r, s in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return Matrix(self.rows + other.rows, self.ncols)

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.rows]


def _dot(a, b) -> Scalar:
    s = scalar(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


# -- elimination ------------------------------------------------------------

@dataclass(frozen=True)
class RREF:
    rank: int
    form: Matrix
    pivots: tuple[int, ...]


def rank_and_rref(M) -> RREF:
    """Reduced row echelon form; pivots are the first nonzero entry found."""
    M = as_matrix(M)
    rows = [list(r) for r in M.rows]
    m, n = M.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        pivot_row = rows[r]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return RREF(r, Matrix(rows, n), tuple(pivots))


def rank(M) -> int:
    return rank_and_rref(M).rank


def kernel_basis(M) -> list[tuple[Scalar, ...]]:
    """Right null space basis, one vector per free column in column order."""
    M = as_matrix(M)
    red = rank_and_rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in red.pivots]
    basis = []
    for f in free:
        v = [scalar(0)] * n
        v[f] = scalar(1)
        for i, p in enumerate(red.pivots):
            v[p] = -red.form.rows[i][f]
        basis.append(tuple(v))
    return basis


def _integer_rows(M: Matrix) -> tuple[list[list[int]], Scalar]:
    """Scale each row to integers; returns the rows and the product of scales."""
    rows = []
    scale = scalar(1)
    for r in M.rows:
        den = lcm(*(int(v.denominator) for v in r)) if r else 1
        rows.append([int(v * den) for v in r])
        scale *= den
    return rows, scale


def bareiss_determinant(rows: list[list]) -> object:
    """Fraction-free determinant of a square integer (or ring) matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def determinant(M) -> Scalar:
    M = as_matrix(M)
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    rows, scale = _integer_rows(M)
    return scalar(bareiss_determinant([[gmpy2.mpz(v) for v in r] for r in rows])) / scale


def right_inverse(B) -> Matrix:
    """C with B @ C = I: rows of C at the pivot columns hold the inverse of
    the pivot-column block of B, every other row is zero."""
    B = as_matrix(B)
    r, n = B.shape
    red = rank_and_rref(B)
    if red.rank != r:
        raise RankError(f"matrix of rank {red.rank} has no right inverse (needs rank {r})")
    block = B.submatrix(range(r), red.pivots)
    block_inv = inverse(block)
    out = [[scalar(0)] * r for _ in range(n)]
    for k, p in enumerate(red.pivots):
        out[p] = list(block_inv.rows[k])
    return Matrix(out, r)


def inverse(M) -> Matrix:
    M = as_matrix(M)
    n = M.nrows
    if M.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    red = rank_and_rref(M.hstack(Matrix.identity(n)))
    if red.pivots[:n] != tuple(range(n)):
        raise RankError("singular matrix")
    return Matrix([r[n:] for r in red.form.rows], n)


def matrix_with_kernel(S: Sequence[Sequence], n: int | None = None) -> Matrix:
    """Matrix B whose right kernel is exactly span(S); rank B = n - len(S)."""
    S = [tuple(scalar(v) for v in s) for s in S]
    if n is None:
        if not S:
            raise ValueError("dimension needed when S is empty")
        n = len(S[0])
    if any(len(s) != n for s in S):
        raise ValueError("vectors of unequal length")
    if not S:
        return Matrix.identity(n)
    if len(S) >= n:
        raise ValueError("need fewer than n vectors")
    if rank(S) != len(S):
        raise RankError("kernel vectors are linearly dependent")
    return Matrix(kernel_basis(Matrix(S, n)), n)


def same_span(U: Sequence[Sequence], V: Sequence[Sequence], n: int) -> bool:
    U, V = list(U), list(V)
    ru = rank(Matrix(U, n)) if U else 0
    rv = rank(Matrix(V, n)) if V else 0
    if ru != rv:
        return False
    if not U:
        return True
    return rank(Matrix(U + V, n)) == ru


def in_span(v: Sequence, basis: Sequence[Sequence], n: int) -> bool:
    if not basis:
        return all(not scalar(x) for x in v)
    return rank(Matrix(list(basis) + [v], n)) == rank(Matrix(basis, n))


# -- principal minors -------------------------------------------------------

@dataclass
class MinorSizeReport:
    size: int
    count: int
    all_vanish: bool
    witness: tuple[int, ...] | None = None
    witness_value: Scalar | None = None


@dataclass
class MinorScan:
    lo: int
    hi: int
    sizes: list[MinorSizeReport] = field(default_factory=list)

    @property
    def all_vanish(self) -> bool:
        return all(s.all_vanish for s in self.sizes)

    @property
    def first_witness(self) -> MinorSizeReport | None:
        return next((s for s in self.sizes if not s.all_vanish), None)


def principal_minor_scan(A, lo: int, hi: int) -> MinorScan:
    """For each size in [lo, hi], do all principal minors of A vanish?"""
    A = as_matrix(A)
    n = A.nrows
    if A.ncols != n:
        raise ValueError("principal minors need a square matrix")
    if not 2 <= lo <= hi <= n:
        raise ValueError(f"bad size range [{lo}, {hi}] for n = {n}")
    if n > MAX_MINOR_SCAN:
        raise ValueError(f"principal minor scan is capped at n = {MAX_MINOR_SCAN}")
    scan = MinorScan(lo, hi)
    for size in range(lo, hi + 1):
        rep = MinorSizeReport(size, comb(n, size), True)
        for idx in itertools.combinations(range(n), size):
            val = determinant(A.submatrix(idx, idx))
            if val:
                rep.all_vanish = False
                rep.witness = tuple(i + 1 for i in idx)
                rep.witness_value = val
                break
        scan.sizes.append(rep)
    return scan
