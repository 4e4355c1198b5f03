"""Gorni-Zampieri pairing between a map f in dimension r and a power-linear
map F in dimension n > r, through matrices B (r x n) and C (n x r):

1. f(y) = B F(C y)
2. B C = I_r
3. ker B = ker JH (strong) or ker B inside ker JH (weak), H = F - X,

with ker JH read as the constant kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import (
    Matrix,
    as_matrix,
    in_span,
    kernel_basis,
    matrix_with_kernel,
    right_inverse,
)
from .poly import Polynomial, Scalar, linear_combination, scalar, variables
from .polymap import (
    PolyMap,
    PowerLinearData,
    apply_map,
    constant_kernel,
    jacobian,
)
from .power_linear import realize_map, waring_decompose

STRONG = "strong"
WEAK = "weak"
INVALID = "invalid"


class PairingError(ValueError):
    pass


@dataclass
class GZPair:
    f: PolyMap
    F: PolyMap
    B: Matrix
    C: Matrix
    status: str
    failed: str | None = None

    @property
    def r(self) -> int:
        return self.f.n

    @property
    def n(self) -> int:
        return self.F.n


@dataclass(frozen=True)
class PairingCheck:
    status: str
    failed: str | None = None  # first failed condition, e.g. "condition 2: BC = I_r"


# -- helpers ----------------------------------------------------------------

def linear_map_polys(M: Matrix, nvars: int) -> list[Polynomial]:
    """Components of y -> M y as polynomials in ``nvars`` variables."""
    M = as_matrix(M)
    if M.ncols != nvars:
        raise PairingError(f"matrix with {M.ncols} columns applied to {nvars} variables")
    return [Polynomial.linear_form(row) for row in M.rows]


def reduced_map(F: PolyMap, B: Matrix, C: Matrix) -> list[Polynomial]:
    """B F(C y) as r polynomials in y."""
    r = C.ncols
    Y = linear_map_polys(C, r)
    FY = apply_map(F, Y)
    return [linear_combination(row, FY, r) for row in B.rows]


def kernel_vectors_annihilate(JH, vectors: Sequence[Sequence[Scalar]]) -> bool:
    """JH v == 0 identically for every v."""
    nvars = JH.nvars
    for v in vectors:
        for row in JH.rows:
            if not linear_combination(v, row, nvars).is_zero():
                return False
    return True


# -- verification -----------------------------------------------------------

def verify_pairing(f: PolyMap, F: PolyMap, B, C) -> PairingCheck:
    B, C = as_matrix(B), as_matrix(C)
    r, n = f.n, F.n
    if not r < n:
        raise PairingError(f"need r < n, got r = {r}, n = {n}")
    if B.shape != (r, n) or C.shape != (n, r):
        raise PairingError(f"B must be {r}x{n} and C {n}x{r}, got {B.shape} and {C.shape}")
    if list(f.components) != reduced_map(F, B, C):
        return PairingCheck(INVALID, "condition 1: f(y) = B F(C y)")
    if B @ C != Matrix.identity(r):
        return PairingCheck(INVALID, "condition 2: BC = I_r")
    JH = jacobian(F.H())
    kerB = kernel_basis(B)
    if not kernel_vectors_annihilate(JH, kerB):
        return PairingCheck(INVALID, "condition 3: ker B inside ker JH")
    if len(constant_kernel(JH)) == len(kerB):
        return PairingCheck(STRONG)
    return PairingCheck(WEAK, "ker B is a proper subspace of ker JH")


def make_pair(f: PolyMap, F: PolyMap, B, C) -> GZPair:
    check = verify_pairing(f, F, B, C)
    return GZPair(f, F, as_matrix(B), as_matrix(C), check.status, check.failed)


# -- lifting ----------------------------------------------------------------

@dataclass(frozen=True)
class LiftColumn:
    form: tuple[Scalar, ...]
    exponent: int


def _coordinate_form(r: int, j: int) -> tuple[Scalar, ...]:
    return tuple(scalar(1 if k == j else 0) for k in range(r))


def gz_lift(f: PolyMap) -> GZPair:
    """Power-linear F with f = B F(C x), built from Waring decompositions.

    Columns are (linear form, exponent) pairs; column k of B holds the
    coefficients of (mu_k . x)^{e_k} in each h_i.  Cancelling column pairs
    (+u, -u) are appended until B has rank r, the forms span the dual
    space and there are more columns than r.  Then A = M B, M stacking the
    forms, so ker A = ker B.
    """
    r = f.n
    if r < 1:
        raise PairingError("cannot lift a map of dimension 0")
    h = f.H()
    if all(p.is_zero() for p in h):
        raise PairingError("nothing to lift: f is the identity")
    for i, p in enumerate(h):
        if not p.is_zero() and p.min_degree() < 2:
            raise PairingError(f"h{i + 1} has constant or linear terms; normalise f first")

    columns: list[LiftColumn] = []
    index: dict[LiftColumn, int] = {}
    coeffs: list[dict[int, Scalar]] = [dict() for _ in range(r)]
    for i, p in enumerate(h):
        for _, part in p.homogeneous_parts().items():
            for term in waring_decompose(part):
                col = LiftColumn(term.linear_form, term.exponent)
                k = index.get(col)
                if k is None:
                    k = index[col] = len(columns)
                    columns.append(col)
                coeffs[i][k] = coeffs[i].get(k, scalar(0)) + term.coefficient

    # drop columns whose merged coefficients vanished in every row
    live = [k for k in range(len(columns)) if any(coeffs[i].get(k) for i in range(r))]
    columns = [columns[k] for k in live]
    col_vectors = [[coeffs[i].get(k, scalar(0)) for i in range(r)] for k in live]

    e_min = min(c.exponent for c in columns)
    forms = [c.form for c in columns]
    missing_forms = []
    span = list(forms)
    for j in range(r):
        e = _coordinate_form(r, j)
        if not in_span(e, span, r):
            missing_forms.append(e)
            span.append(e)
    missing_cols = []
    cspan = list(col_vectors)
    for j in range(r):
        e = _coordinate_form(r, j)
        if not in_span(e, cspan, r):
            missing_cols.append(e)
            cspan.append(e)
    pairs = []
    for k in range(max(len(missing_forms), len(missing_cols))):
        mu = missing_forms[k] if k < len(missing_forms) else _coordinate_form(r, 0)
        u = missing_cols[k] if k < len(missing_cols) else _coordinate_form(r, 0)
        pairs.append((mu, u))
    while len(columns) + 2 * len(pairs) <= r:
        pairs.append((_coordinate_form(r, 0), _coordinate_form(r, 0)))
    for mu, u in pairs:
        for sign in (1, -1):
            columns.append(LiftColumn(mu, e_min))
            col_vectors.append([sign * a for a in u])

    n = len(columns)
    B = Matrix([[col_vectors[k][i] for k in range(n)] for i in range(r)], n)
    M = Matrix([c.form for c in columns], r)
    A = M @ B
    data = PowerLinearData(A, tuple(c.exponent for c in columns))
    F = realize_map(data)
    C = right_inverse(B)
    return make_pair(f, F, B, C)


# -- reduction --------------------------------------------------------------

def gz_reduce(F: PolyMap, r: int) -> GZPair:
    """Weakly paired f in dimension r from a subspace of the constant kernel."""
    n = F.n
    if r >= n:
        raise PairingError(f"r = {r} must be smaller than n = {n}")
    if r < 1:
        raise PairingError("r must be positive")
    K = constant_kernel(jacobian(F.H()))
    if r < n - len(K):
        raise PairingError(f"r = {r} is below n - dim(constant kernel) = {n - len(K)}")
    S = K[: n - r]
    B = matrix_with_kernel(S, n)
    C = right_inverse(B)
    f = PolyMap(reduced_map(F, B, C))
    return make_pair(f, F, B, C)


# -- kernel translation -----------------------------------------------------

def kernel_translation_check(F: PolyMap, B, C) -> bool:
    """H(X + t y0) = H(X) for y0 in ker B, B(CB - I) = 0 and H(CBX) = H(X)."""
    B, C = as_matrix(B), as_matrix(C)
    n = F.n
    H = F.H()
    H_ext = [h.extend(n + 1) for h in H]
    Xt = variables(n + 1)
    t = Xt[n]
    for y0 in kernel_basis(B):
        shifted = [x + t.scale(c) for x, c in zip(Xt[:n], y0)] + [t]
        if [h.substitute(shifted) for h in H_ext] != H_ext:
            return False
    CB = C @ B
    if not (B @ (CB - Matrix.identity(n))).is_zero():
        return False
    CBX = linear_map_polys(CB, n)
    return [h.substitute(CBX) for h in H] == H


# -- extension by one dimension ---------------------------------------------

def extend_with_power(pair: GZPair, i: int, d: int) -> GZPair:
    """Append x_{n+1} + (B_i X)^d; B gains a zero column, C a zero row."""
    r, n = pair.r, pair.n
    if not 1 <= i <= r:
        raise PairingError(f"row index {i} outside 1..{r}")
    if d < 2:
        raise PairingError("extension exponent must be >= 2")
    Bi = pair.B.rows[i - 1]
    if pair.F.power_linear is not None:
        data = pair.F.power_linear
        A = Matrix([list(row) + [0] for row in data.A.rows] + [list(Bi) + [0]], n + 1)
        F_ext = realize_map(PowerLinearData(A, data.d + (d,), data.defaulted))
    else:
        comps = [p.extend(n + 1) for p in pair.F.components]
        last = Polynomial.variable(n + 1, n) + Polynomial.linear_form(list(Bi) + [0]) ** d
        F_ext = PolyMap(comps + [last])
    B_ext = Matrix([list(row) + [0] for row in pair.B.rows], n + 1)
    C_ext = Matrix(list(pair.C.rows) + [[0] * r], r)
    return make_pair(pair.f, F_ext, B_ext, C_ext)


def extension_tail_inverse(pair: GZPair, f_inv: PolyMap, i: int, d: int) -> Polynomial:
    """x_{n+1} - (f^{-1}(B X))_i^d in n + 1 variables, for the extended map."""
    n = pair.n
    BX = [Polynomial.linear_form(list(row) + [0]) for row in pair.B.rows]
    gi = f_inv.components[i - 1].substitute(BX)
    return Polynomial.variable(n + 1, n) - gi ** d


# -- collisions on lines ----------------------------------------------------

def lift_line_collision(pair: GZPair, a: Sequence, lam, mu) -> tuple[Scalar, ...] | None:
    """If f(lam B a) = f(mu B a) with lam != mu, return b in ker B with
    F(lam (a + b)) = F(mu (a + b)); None when f separates the two points.

    Raises if the constructed b fails either property.
    """
    lam, mu = scalar(lam), scalar(mu)
    if lam == mu:
        raise ValueError("lam and mu must differ")
    a = [scalar(v) for v in a]
    Ba = pair.B @ a
    if pair.f.evaluate([lam * v for v in Ba]) != pair.f.evaluate([mu * v for v in Ba]):
        return None
    Fl = pair.F.evaluate([lam * v for v in a])
    Fm = pair.F.evaluate([mu * v for v in a])
    b = tuple((x - y) / (mu - lam) for x, y in zip(Fl, Fm))
    if any(pair.B @ b):
        raise AssertionError("constructed b is not in ker B")
    ab = [x + y for x, y in zip(a, b)]
    if pair.F.evaluate([lam * v for v in ab]) != pair.F.evaluate([mu * v for v in ab]):
        raise AssertionError("F separates lam (a + b) and mu (a + b)")
    return b
