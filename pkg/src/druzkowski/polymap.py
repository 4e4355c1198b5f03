"""Polynomial maps F = X + H and their Jacobian diagnostics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import gmpy2

from .linalg import Matrix, as_matrix, kernel_basis, rank
from .poly import (
    NEG_INF,
    ONE,
    ZERO,
    ArityError,
    Polynomial,
    Scalar,
    linear_combination,
    scalar,
    variables,
)
from .rng import SplitMix64

DEFAULT_ZERO_ROW_DEGREE = 2


class ProfileError(ValueError):
    """A homogeneous profile does not match the actual component degrees."""


@dataclass(frozen=True)
class PowerLinearData:
    """Matrix A and exponents d describing H_i = (A_i X)^{d_i}.

    ``defaulted`` lists zero rows whose exponent was filled in rather than
    read off a nonzero component.
    """

    A: Matrix
    d: tuple[int, ...]
    defaulted: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "d", tuple(int(e) for e in self.d))
        n = self.A.nrows
        if self.A.ncols != n or len(self.d) != n:
            raise ValueError("A must be n x n with n exponents")
        if any(e < 2 for e in self.d):
            raise ValueError("exponents must be >= 2")

    @property
    def n(self) -> int:
        return self.A.nrows

    def linear_forms(self) -> list[Polynomial]:
        return [Polynomial.linear_form(row) for row in self.A.rows]

    def apply_H(self, Y: Sequence[Polynomial]) -> list[Polynomial]:
        """H(Y) computed as (A Y)^{*d}, never expanding (A_i X)^{d_i} first."""
        m = Y[0].nvars
        out = []
        seen: dict[tuple, Polynomial] = {}
        for row, e in zip(self.A.rows, self.d):
            if not any(row):
                out.append(Polynomial(m))
                continue
            p = seen.get((row, e))
            if p is None:
                p = seen[(row, e)] = linear_combination(row, Y, m) ** e
            out.append(p)
        return out


class PolyMap:
    """A tuple of n polynomials in n variables."""

    __slots__ = ("components", "power_linear")

    def __init__(self, components: Iterable[Polynomial], power_linear: PowerLinearData | None = None):
        comps = tuple(components)
        n = len(comps)
        for p in comps:
            if p.nvars != n:
                raise ArityError(f"component in {p.nvars} variables for a map of dimension {n}")
        self.components = comps
        self.power_linear = power_linear

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(variables(n))

    @classmethod
    def from_H(cls, H: Sequence[Polynomial], power_linear: PowerLinearData | None = None) -> "PolyMap":
        n = len(H)
        return cls([x + h for x, h in zip(variables(n), H)], power_linear)

    @property
    def n(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"PolyMap([{', '.join(repr(p.to_str()) for p in self.components)}])"

    def H(self) -> list[Polynomial]:
        return [f - x for f, x in zip(self.components, variables(self.n))]

    def degree(self):
        return map_degree(self)

    def evaluate(self, point: Sequence) -> tuple[Scalar, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def to_strings(self, names: Sequence[str] | None = None) -> list[str]:
        return [p.to_str(names) for p in self.components]

    def is_identity(self) -> bool:
        return all(f == x for f, x in zip(self.components, variables(self.n)))


def map_degree(F) -> int:
    """Largest component degree; the zero map has degree -inf."""
    degs = [p.degree() for p in F]
    real = [d for d in degs if d is not NEG_INF]
    return max(real) if real else NEG_INF


def substitute_all(F: Sequence[Polynomial], G: Sequence[Polynomial], maxdeg: int | None = None) -> list[Polynomial]:
    return [p.substitute(G, maxdeg) for p in F]


def compose_maps(F: PolyMap, G: PolyMap | Sequence[Polynomial]) -> PolyMap:
    """F o G.  Power-linear F is applied as G + (A G)^{*d}."""
    G_comps = list(G)
    if len(G_comps) != F.n:
        raise ArityError(f"cannot compose a {F.n}-map with a {len(G_comps)}-map")
    if F.power_linear is not None:
        H = F.power_linear.apply_H(G_comps)
        return PolyMap([g + h for g, h in zip(G_comps, H)])
    return PolyMap(substitute_all(F.components, G_comps))


def apply_map(F: PolyMap, G: Sequence[Polynomial]) -> list[Polynomial]:
    """F(G) for a list G that may live in a different number of variables."""
    G = list(G)
    if len(G) != F.n:
        raise ArityError(f"map of dimension {F.n} applied to {len(G)} polynomials")
    if F.power_linear is not None:
        H = F.power_linear.apply_H(G)
        return [g + h for g, h in zip(G, H)]
    return substitute_all(F.components, G)


# -- polynomial matrices ----------------------------------------------------

class PolyMatrix:
    """Matrix with polynomial entries sharing one arity."""

    __slots__ = ("rows", "nvars")

    def __init__(self, rows: Iterable[Iterable[Polynomial]], nvars: int):
        self.rows = tuple(tuple(r) for r in rows)
        self.nvars = nvars
        for r in self.rows:
            for p in r:
                if p.nvars != nvars:
                    raise ArityError("matrix entries must share one arity")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"PolyMatrix({[[p.to_str() for p in r] for r in self.rows]})"

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls(
            [[Polynomial.constant(nvars, 1 if i == j else 0) for j in range(n)] for i in range(n)], nvars
        )

    @classmethod
    def from_scalars(cls, M, nvars: int) -> "PolyMatrix":
        M = as_matrix(M)
        return cls([[Polynomial.constant(nvars, v) for v in r] for r in M.rows], nvars)

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.rows for p in r)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            nz = [(t, a) for t, a in enumerate(r) if a]
            row = []
            for j in range(n):
                acc = Polynomial(self.nvars)
                for t, a in nz:
                    b = cols[j][t]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.nvars)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.nvars)

    def scale_rows(self, factors: Sequence[Polynomial]) -> "PolyMatrix":
        return PolyMatrix([[f * p for p in r] for f, r in zip(factors, self.rows)], self.nvars)

    def evaluate(self, point: Sequence) -> Matrix:
        return Matrix([[p.evaluate(point) for p in r] for r in self.rows], self.shape[1])

    def substitute(self, G: Sequence[Polynomial]) -> "PolyMatrix":
        m = G[0].nvars
        return PolyMatrix([[p.substitute(G) for p in r] for r in self.rows], m)

    def trace(self) -> Polynomial:
        acc = Polynomial(self.nvars)
        for i, r in enumerate(self.rows):
            acc = acc + r[i]
        return acc

    def to_strings(self, names=None) -> list[list[str]]:
        return [[p.to_str(names) for p in r] for r in self.rows]


def jacobian(F) -> PolyMatrix:
    comps = list(F)
    n = comps[0].nvars if comps else 0
    return PolyMatrix([[p.diff(j) for j in range(n)] for p in comps], n)


def berkowitz(M: Sequence[Sequence], zero, one) -> list:
    """Characteristic polynomial coefficients [1, c1, .., cn] of det(tI - M).

    Division free, so it works for polynomial entries.
    """
    n = len(M)
    vect = [one]
    for r in range(n):
        A = M[r][r]
        R = [M[r][j] for j in range(r)]
        C = [M[i][r] for i in range(r)]
        t = [one, -A]
        v = C
        for _ in range(r):
            s = zero
            for a, b in zip(R, v):
                if a and b:
                    s = s + a * b
            t.append(-s)
            nv = []
            for i in range(r):
                acc = zero
                for j in range(r):
                    a = M[i][j]
                    if a and v[j]:
                        acc = acc + a * v[j]
                nv.append(acc)
            v = nv
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                a = t[i - j]
                b = vect[j]
                if a and b:
                    acc = acc + a * b
            new.append(acc)
        vect = new
    return vect


def poly_determinant(M: PolyMatrix) -> Polynomial:
    m, n = M.shape
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Polynomial.constant(M.nvars, 1)
    z = Polynomial(M.nvars)
    o = Polynomial.constant(M.nvars, 1)
    c = berkowitz(M.rows, z, o)
    return c[n] if n % 2 == 0 else -c[n]


def scalar_charpoly(M: Matrix) -> list[Scalar]:
    return berkowitz(M.rows, ZERO, ONE)


def jacobian_determinant(F) -> Polynomial:
    return poly_determinant(jacobian(F))


def _random_points(nvars: int, count: int, seed: int) -> list[list[Scalar]]:
    rng = SplitMix64(seed)
    return [[scalar(rng.randint(-9, 9)) for _ in range(nvars)] for _ in range(count)]


def is_keller(F) -> bool:
    """det JF == 1 identically (the det = 1 normalisation)."""
    J = jacobian(F)
    n = J.nvars
    for pt in _random_points(n, 3, 0x4B454C4C):
        if scalar_determinant_at(J, pt) != 1:
            return False
    return poly_determinant(J) == 1


def scalar_determinant_at(J: PolyMatrix, point) -> Scalar:
    from .linalg import determinant

    return determinant(J.evaluate(point))


# -- nilpotency -------------------------------------------------------------

def _scalar_nilpotency_index(M: Matrix) -> int | None:
    n = M.nrows
    P = M
    for k in range(1, n + 1):
        if P.is_zero():
            return k
        P = P @ M
    return None


def nilpotency_index(M: PolyMatrix, probes: int = 2) -> int | None:
    """Least k with M^k = 0, or None when M is not nilpotent.

    Evaluations at a few integer points give a lower bound (and reject
    non-nilpotent inputs early); the answer itself comes from exact
    symbolic powers, never from the probes.
    """
    m, n = M.shape
    if m != n:
        raise ValueError("nilpotency index of a non-square matrix")
    if M.is_zero():
        return 1
    lower = 1
    for pt in _random_points(M.nvars, probes, 0x4E494C50):
        k = _scalar_nilpotency_index(M.evaluate(pt))
        if k is None:
            return None
        lower = max(lower, k)
    P = M
    for _ in range(lower - 1):
        P = P @ M
    k = lower
    while k <= n:
        if P.is_zero():
            return k
        P = P @ M
        k += 1
    return None


def matrix_power(M: PolyMatrix, k: int) -> PolyMatrix:
    P = PolyMatrix.identity(M.shape[0], M.nvars)
    for _ in range(k):
        P = P @ M
    return P


def reduced_jacobian(data: PowerLinearData) -> PolyMatrix:
    """JH for H = (AX)^{*d}, written in rank(A) variables y = R X.

    R is the RREF of A, so A = A[:, pivots] R and every entry
    d_i (A_i X)^{d_i - 1} A_ij is a polynomial in R X.  R has full row rank,
    hence a polynomial identity in y holds iff it holds in X; powers of this
    matrix vanish exactly when the powers of JH do.
    """
    from .linalg import rank_and_rref

    A = data.A
    red = rank_and_rref(A)
    rho = red.rank
    M = [[row[p] for p in red.pivots] for row in A.rows]
    out = []
    for row, m, e in zip(A.rows, M, data.d):
        if not any(row):
            out.append([Polynomial(rho)] * A.ncols)
            continue
        w = Polynomial.linear_form(m) ** (e - 1) if rho else Polynomial(0)
        w = w.scale(e)
        out.append([w.scale(a) for a in row])
    return PolyMatrix(out, rho)


def map_jacobian_of_H(F: PolyMap) -> PolyMatrix:
    """JH, in reduced variables when F carries power-linear data.

    Only use the result for identity tests (zero, nilpotent, constant
    kernel); its entries are not the entries of JH.
    """
    if F.power_linear is not None:
        return reduced_jacobian(F.power_linear)
    return jacobian(F.H())


def map_nilpotency_index(F: PolyMap) -> int | None:
    return nilpotency_index(map_jacobian_of_H(F))


# -- kernels and rank -------------------------------------------------------

def constant_kernel(M: PolyMatrix) -> list[tuple[Scalar, ...]]:
    """Basis of {v in Q^n : M v = 0 identically}, one condition per (row, monomial)."""
    _, n = M.shape
    conditions = []
    for r in M.rows:
        keys = set()
        for p in r:
            keys.update(p._terms)
        for key in sorted(keys):
            conditions.append([p._terms.get(key, ZERO) for p in r])
    return kernel_basis(Matrix(conditions, n))


def generic_rank(M: PolyMatrix, probes: int = 3, confirm: bool = True) -> int:
    """Rank over the rational function field.

    Ranks at integer points bound it from below; with ``confirm`` every
    minor of the next size is checked to vanish symbolically, raising the
    answer whenever a nonzero one turns up.
    """
    m, n = M.shape
    rho = 0
    for pt in _random_points(M.nvars, probes, 0x52414E4B):
        rho = max(rho, rank(M.evaluate(pt)))
    if not confirm:
        return rho
    while rho < min(m, n):
        size = rho + 1
        found = False
        for rows in itertools.combinations(range(m), size):
            for cols in itertools.combinations(range(n), size):
                sub = PolyMatrix([[M.rows[i][j] for j in cols] for i in rows], M.nvars)
                if not poly_determinant(sub).is_zero():
                    found = True
                    break
            if found:
                break
        if not found:
            return rho
        rho = size
    return rho


# -- homogeneous profiles ---------------------------------------------------

@dataclass(frozen=True)
class HomogeneousProfile:
    degrees: tuple[int, ...]
    defaulted: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError("profile degrees must be >= 1")

    @property
    def reciprocal(self) -> tuple[Scalar, ...]:
        return tuple(scalar(1) / d for d in self.degrees)


def profile_of(F: PolyMap) -> HomogeneousProfile:
    """Degrees of the homogeneous components of H = F - X (zero rows default to 2)."""
    degs = []
    defaulted = set()
    for i, h in enumerate(F.H()):
        if h.is_zero():
            degs.append(DEFAULT_ZERO_ROW_DEGREE)
            defaulted.add(i)
            continue
        if not h.is_homogeneous():
            raise ProfileError(f"H{i + 1} is not homogeneous")
        degs.append(h.degree())
    return HomogeneousProfile(tuple(degs), frozenset(defaulted))


def check_profile(F: PolyMap, prof: HomogeneousProfile) -> None:
    if len(prof.degrees) != F.n:
        raise ProfileError(f"profile has {len(prof.degrees)} degrees for a map of dimension {F.n}")
    for i, (h, d) in enumerate(zip(F.H(), prof.degrees)):
        if h.is_zero():
            continue
        if not h.is_homogeneous() or h.degree() != d:
            raise ProfileError(f"H{i + 1} is not homogeneous of degree {d}")


def euler_form_check(F: PolyMap, prof: HomogeneousProfile | None = None) -> bool:
    """Does F = (I + D' JH) X hold, with D' = diag(1/d_i)?"""
    if prof is None:
        prof = profile_of(F)
    check_profile(F, prof)
    n = F.n
    X = variables(n)
    JH = jacobian(F.H())
    for i in range(n):
        euler = Polynomial(n)
        for j in range(n):
            euler = euler + X[j] * JH.rows[i][j]
        if F.components[i] != X[i] + euler.scale(prof.reciprocal[i]):
            return False
    return True


# -- power-linear detection -------------------------------------------------

def rational_root(c: Scalar, d: int) -> Scalar | None:
    """Exact rational d-th root, the positive one for even d; None if irrational."""
    c = scalar(c)
    if c < 0 and d % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    num, exact_n = gmpy2.iroot(abs(c.numerator), d)
    den, exact_d = gmpy2.iroot(c.denominator, d)
    if not (exact_n and exact_d):
        return None
    return sign * scalar(num) / scalar(den)


def linear_root(h: Polynomial, d: int) -> tuple[Scalar, ...] | None:
    """Coefficients a with h = (a . X)^d, if they exist over Q."""
    n = h.nvars
    if h.is_zero() or not h.is_homogeneous() or h.degree() != d:
        return None
    used = h.variables()
    j0 = min(used)
    pure = [0] * n
    pure[j0] = d
    lead = rational_root(h.coefficient(pure), d)
    if lead is None or not lead:
        return None
    coeffs = [scalar(0)] * n
    coeffs[j0] = lead
    denom = d * lead ** (d - 1)
    for j in sorted(used):
        if j == j0:
            continue
        mixed = [0] * n
        mixed[j0] = d - 1
        mixed[j] += 1
        coeffs[j] = h.coefficient(mixed) / denom
    if Polynomial.linear_form(coeffs) ** d != h:
        return None
    return tuple(coeffs)


def detect_power_linear(F: PolyMap) -> PowerLinearData | None:
    """Recover (A, d) with F - X = (A X)^{*d}, or None if no rational data exists."""
    n = F.n
    rows = []
    degs = []
    defaulted = set()
    for i, h in enumerate(F.H()):
        if h.is_zero():
            rows.append([0] * n)
            degs.append(DEFAULT_ZERO_ROW_DEGREE)
            defaulted.add(i)
            continue
        if not h.is_homogeneous():
            return None
        d = h.degree()
        if d < 2:
            return None
        a = linear_root(h, d)
        if a is None:
            return None
        rows.append(list(a))
        degs.append(d)
    return PowerLinearData(Matrix(rows, n), tuple(degs), frozenset(defaulted))


def with_power_linear(F: PolyMap) -> PolyMap:
    """F carrying its detected power-linear data, if any."""
    if F.power_linear is not None:
        return F
    data = detect_power_linear(F)
    return PolyMap(F.components, data) if data is not None else F
