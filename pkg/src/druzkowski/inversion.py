"""Inverses of polynomial maps and the diagnostics built around them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Matrix, rank
from .poly import NEG_INF, Polynomial, Scalar, linear_combination, scalar, variables
from .polymap import (
    HomogeneousProfile,
    PolyMap,
    PolyMatrix,
    apply_map,
    check_profile,
    compose_maps,
    constant_kernel,
    generic_rank,
    jacobian,
    map_degree,
    map_jacobian_of_H,
    nilpotency_index,
    poly_determinant,
    profile_of,
    substitute_all,
)


class LowDegreeError(ValueError):
    """H has constant or linear terms, so X + H is not normalised."""


class HypothesisError(ValueError):
    """A required hypothesis failed; the message names which one."""


@dataclass
class InverseResult:
    inverse: PolyMap | None
    bound: int | None = None
    certified: bool = False
    method: str = "formal"
    details: dict = field(default_factory=dict)

    @property
    def invertible(self) -> bool:
        return self.inverse is not None

    @property
    def degree(self):
        return map_degree(self.inverse) if self.inverse is not None else None


def _check_normalised(H: Sequence[Polynomial]) -> None:
    for i, h in enumerate(H):
        if not h.is_zero() and h.min_degree() < 2:
            raise LowDegreeError(f"H{i + 1} has terms of degree < 2")


def certify_inverse(F: PolyMap, G: PolyMap) -> bool:
    """F o G = X and G o F = X, both checked without truncation."""
    return compose_maps(F, G).is_identity() and compose_maps(G, F).is_identity()


def formal_inverse(F: PolyMap, bound: int | None = None) -> InverseResult:
    """Truncated formal inverse of F = X + H, certified by exact composition.

    Degree-m parts of G = X - H(G) depend only on the parts below m, so G is
    built one degree at a time up to ``bound`` (default (deg F)^(n-1)).  A
    certification attempt is made whenever deg H - 1 consecutive degrees
    come out zero, and once more at the bound.
    """
    n = F.n
    H = F.H()
    _check_normalised(H)
    d = map_degree(F)
    if bound is None:
        bound = d ** (n - 1) if d is not NEG_INF and d >= 2 else 1
    if bound < 1:
        raise ValueError("bound must be at least 1")
    X = variables(n)
    if all(h.is_zero() for h in H):
        return InverseResult(PolyMap(X), bound, True)
    dH = map_degree(H)
    G = list(X)
    zero_run = 0
    checked_at = None
    for m in range(2, bound + 1):
        HG = substitute_all(H, G, maxdeg=m)
        band = [hg.homogeneous_part(m) for hg in HG]
        if any(not b.is_zero() for b in band):
            G = [g - b for g, b in zip(G, band)]
            zero_run = 0
            continue
        zero_run += 1
        if zero_run >= max(1, dH - 1) and checked_at != _snapshot(G):
            checked_at = _snapshot(G)
            cand = PolyMap(G)
            if certify_inverse(F, cand):
                return InverseResult(cand, bound, True)
    cand = PolyMap(G)
    if checked_at != _snapshot(G) and certify_inverse(F, cand):
        return InverseResult(cand, bound, True)
    return InverseResult(None, bound, False)


def _snapshot(G: Sequence[Polynomial]) -> tuple:
    return tuple(G)


def inverse_via_pairing(pair, f_inv: PolyMap) -> PolyMap:
    """F^{-1} = X - H(C f^{-1}(B X)), verified exactly before it is returned.

    For power-linear F with A (I - C B) = 0 the check F o G = X is done in
    the r variables z of H(C f^{-1}(z)): there A = (A C) B, so
    A G = P(B X) with P(z) = (A C) z - A H(C f^{-1}(z)), and F o G = X
    becomes P_i(z)^{d_i} = H_i(C f^{-1}(z)); B has full row rank, so an
    identity in z is the same as one in X.  Otherwise F o G is composed
    in full.
    """
    F, B, C = pair.F, pair.B, pair.C
    if not compose_maps(pair.f, f_inv).is_identity():
        raise ValueError("f_inv is not an inverse of f")
    n, r = F.n, B.nrows
    CY = [linear_combination(row, f_inv.components, r) for row in C.rows]
    HCY = [fy - y for fy, y in zip(apply_map(F, CY), CY)]
    BX = [Polynomial.linear_form(row) for row in B.rows]
    # H(C f^{-1}(BX)) is cheaper from C f^{-1}(BX) than by substituting BX into HCY
    Y = [linear_combination(row, [g.substitute(BX) for g in f_inv.components], n) for row in C.rows]
    G = PolyMap([x - (fy - y) for x, fy, y in zip(variables(n), apply_map(F, Y), Y)])
    data = F.power_linear
    if data is not None and (data.A @ (Matrix.identity(n) - C @ B)).is_zero():
        AC = data.A @ C
        AH = [linear_combination(row, HCY, r) for row in data.A.rows]
        ok = True
        for i in range(n):
            P = Polynomial.linear_form(AC.rows[i]) - AH[i]
            target = HCY[i]
            if not any(data.A.rows[i]):
                ok = target.is_zero()
            elif P ** data.d[i] != target:
                ok = False
            if not ok:
                break
    else:
        ok = compose_maps(F, G).is_identity()
    if not ok:
        raise AssertionError("X - H(C f^{-1}(BX)) failed to invert F")
    return G


def _jh_powers_vanish(JH: PolyMatrix, k: int) -> bool:
    P = JH
    for _ in range(k - 1):
        P = P @ JH
    return P.is_zero()


def nilpotent_inverse_formula(F: PolyMap) -> InverseResult:
    """X - H(X - H) for homogeneous H with JH^3 = 0.

    The kernel-dimension hypothesis is checked through the generic rank:
    rank JH must equal n - dim(constant kernel of JH).
    """
    n = F.n
    H = F.H()
    degs = {h.degree() for h in H if not h.is_zero()}
    if not all(h.is_homogeneous() for h in H) or len(degs) > 1:
        raise HypothesisError("H is not homogeneous")
    X = variables(n)
    if not degs:
        return InverseResult(PolyMap(X), None, True, "nilpotent")
    JH = jacobian(H)
    if not _jh_powers_vanish(JH, 3):
        raise HypothesisError("JH^3 != 0")
    kernel_dim = len(constant_kernel(JH))
    grank = generic_rank(JH)
    if grank != n - kernel_dim:
        raise HypothesisError(
            f"kernel dimension hypothesis fails: rank JH = {grank}, n - dim constant kernel = {n - kernel_dim}"
        )
    Y = [x - h for x, h in zip(X, H)]
    HY = [fy - y for fy, y in zip(apply_map(F, Y), Y)]
    G = PolyMap([x - h for x, h in zip(X, HY)])
    if not certify_inverse(F, G):
        return InverseResult(None, None, False, "nilpotent")
    return InverseResult(G, None, True, "nilpotent")


# -- rank-one normal form ---------------------------------------------------

@dataclass(frozen=True)
class RankOneNormalForm:
    """H = [c_1..c_s, t, h_{s+2}(t), .., h_n(t)] with t = lam x_{s+1} + g(x_1..x_s).

    ``g`` lives in n variables but may only use the first s; ``tail`` holds
    univariate polynomials (one variable) for h_{s+2} .. h_n.
    """

    n: int
    s: int
    c: tuple
    lam: Scalar
    g: Polynomial
    tail: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(scalar(v) for v in self.c))
        object.__setattr__(self, "lam", scalar(self.lam))
        object.__setattr__(self, "tail", tuple(self.tail))
        if not 0 <= self.s <= self.n - 1:
            raise ValueError("need 0 <= s <= n - 1")
        if len(self.c) != self.s:
            raise ValueError("need exactly s constants")
        if len(self.tail) != self.n - self.s - 1:
            raise ValueError("need n - s - 1 tail polynomials")
        if any(t.nvars != 1 for t in self.tail):
            raise ValueError("tail polynomials must be univariate")
        if self.g.nvars != self.n:
            object.__setattr__(self, "g", self.g.extend(self.n))
        if any(j >= self.s for j in self.g.variables()):
            raise ValueError("g may only use x_1 .. x_s")


def realize_rank_one(nf: RankOneNormalForm) -> PolyMap:
    n, s = nf.n, nf.s
    X = variables(n)
    t = X[s].scale(nf.lam) + nf.g
    H = [Polynomial.constant(n, c) for c in nf.c] + [t] + [h.substitute([t]) for h in nf.tail]
    return PolyMap([x + h for x, h in zip(X, H)])


def _as_univariate_in(h: Polynomial, t: Polynomial) -> Polynomial | None:
    """Univariate p with p(t) = h, found by exact linear solving."""
    from .linalg import Matrix, rank_and_rref

    if t.is_constant():
        return Polynomial.constant(1, h.constant_term()) if h.is_constant() else None
    if h.is_zero():
        return Polynomial(1)
    dt, dh = t.degree(), h.degree()
    if dh % dt:
        return None
    m = dh // dt
    powers = [t ** k for k in range(m + 1)]
    keys = sorted({e for p in powers + [h] for e, _ in p.terms()})
    # augmented system sum_k p_k t^k = h, one row per monomial
    rows = [[p.coefficient(e) for p in powers] + [h.coefficient(e)] for e in keys]
    red = rank_and_rref(Matrix(rows, m + 2))
    if m + 1 in red.pivots:
        return None
    coeffs = [scalar(0)] * (m + 1)
    for row, piv in zip(red.form.rows, red.pivots):
        coeffs[piv] = row[m + 1]
    p = Polynomial.from_terms(1, {(k,): c for k, c in enumerate(coeffs)})
    return p if p.substitute([t]) == h else None


def detect_rank_one_normal_form(F: PolyMap) -> RankOneNormalForm | None:
    """Read F - X as [c_1..c_s, lam x_{s+1} + g, h_{s+2}(t), ..]; None if it is not of that shape."""
    n = F.n
    H = F.H()
    s = 0
    while s < n - 1 and H[s].is_constant():
        s += 1
    t = H[s]
    lam = t.coefficient([1 if j == s else 0 for j in range(n)])
    g = t - Polynomial.variable(n, s).scale(lam)
    if any(j >= s for j in g.variables()):
        return None
    tail = []
    for h in H[s + 1:]:
        p = _as_univariate_in(h, t)
        if p is None:
            return None
        tail.append(p)
    return RankOneNormalForm(n, s, [h.constant_term() for h in H[:s]], lam, g, tuple(tail))


def rank_one_inverse(nf: RankOneNormalForm) -> PolyMap:
    """Closed-form inverse of a rank-one normal form, verified exactly."""
    if nf.lam == -1:
        raise ValueError("lambda = -1 is excluded")
    n, s = nf.n, nf.s
    X = variables(n)
    F = realize_rank_one(nf)
    shifted = [X[j] - nf.c[j] for j in range(s)] + X[s:]
    g_shift = nf.g.substitute(shifted)
    u = (X[s].scale(nf.lam) + g_shift).scale(1 / (nf.lam + 1))
    G = PolyMap(shifted[:s] + [X[s] - u] + [X[j] - h.substitute([u]) for j, h in zip(range(s + 1, n), nf.tail)])
    if u.substitute(list(F.components)) != X[s].scale(nf.lam) + nf.g:
        raise AssertionError("u(F) != lam x_{s+1} + g")
    if not compose_maps(F, G).is_identity():
        raise AssertionError("closed-form inverse failed to invert F")
    return G


# -- lines through the origin -----------------------------------------------

@dataclass(frozen=True)
class DMatrix:
    lam: Scalar
    degrees: tuple[int, ...]
    entries: tuple[Scalar, ...]


def geometric_weight(lam, d: int):
    """(1 + lam + .. + lam^{d-1}) / d; works for scalars and polynomials."""
    acc = lam ** 0
    p = lam ** 0
    for _ in range(d - 1):
        p = p * lam
        acc = acc + p
    return acc * (scalar(1) / d)


def build_D(lam, degrees: Sequence[int]) -> DMatrix:
    lam = scalar(lam)
    if lam == 1:
        raise ValueError("lambda = 1 is excluded")
    degrees = tuple(int(d) for d in degrees)
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be >= 1")
    return DMatrix(lam, degrees, tuple(geometric_weight(lam, d) for d in degrees))


def line_injectivity_check(F: PolyMap, a: Sequence, lam, prof: HomogeneousProfile | None = None) -> tuple[bool, bool]:
    """(F(a) == F(lam a), (I + D JH|_a) a == 0)."""
    if prof is None:
        prof = profile_of(F)
    check_profile(F, prof)
    D = build_D(lam, prof.degrees)
    a = [scalar(v) for v in a]
    lhs = F.evaluate(a) == F.evaluate([D.lam * v for v in a])
    J = jacobian(F.H()).evaluate(a)
    Ja = J @ a
    rhs = all(not (ai + di * ji) for ai, di, ji in zip(a, D.entries, Ja))
    return lhs, rhs


@dataclass
class DetIdentityResult:
    holds: bool
    determinant: Polynomial  # in x_1..x_n and lambda (last variable)
    witness: dict | None = None


def det_identity_check(F: PolyMap, prof: HomogeneousProfile | None = None) -> DetIdentityResult:
    """Is det(I + D JH) = 1 identically in x and lambda?"""
    if prof is None:
        prof = profile_of(F)
    check_profile(F, prof)
    n = F.n
    lam = Polynomial.variable(n + 1, n)
    JH = jacobian(F.H())
    rows = []
    for i in range(n):
        w = geometric_weight(lam, prof.degrees[i])
        row = []
        for j in range(n):
            entry = JH.rows[i][j].extend(n + 1) * w
            if i == j:
                entry = entry + 1
            row.append(entry)
        rows.append(row)
    det = poly_determinant(PolyMatrix(rows, n + 1))
    if det == 1:
        return DetIdentityResult(True, det)
    diff = det - 1
    exps, coeff = next(diff.terms())
    witness = {"lambda_power": exps[n], "x_exponents": list(exps[:n]), "coefficient": str(coeff)}
    for cand in (2, 3, -1, scalar(1) / 2, -2, 4, 5):
        point = variables(n) + [Polynomial.constant(n, cand)]
        special = det.substitute(point)
        if special != 1:
            e2, c2 = next((special - 1).terms())
            witness.update({"lambda": str(scalar(cand)), "monomial": list(e2), "monomial_coefficient": str(c2)})
            break
    return DetIdentityResult(False, det, witness)


# -- degree bounds ----------------------------------------------------------

def degree_bound_report(F: PolyMap, result: InverseResult, pair=None, f_inverse_degree: int | None = None) -> dict:
    """Tabulate the inverse degree against the known and conjectured bounds."""
    if not result.invertible:
        raise ValueError("degree report needs an inverse")
    n = F.n
    dF = map_degree(F)
    dG = result.degree
    k = nilpotency_index(map_jacobian_of_H(F))
    report = {
        "n": n,
        "deg_F": dF,
        "deg_inverse": dG,
        "bcw_bound": dF ** (n - 1),
        "bcw_holds": dG <= dF ** (n - 1),
        "nilpotency_index": k,
    }
    if k is not None:
        nil_bound = dF ** max(k - 1, 0)
        report["nilpotency_bound"] = nil_bound
        report["nilpotency_bound_holds"] = dG <= nil_bound
        report["square_bound_applicable"] = k <= 3
        if k <= 3:
            report["square_bound_holds"] = dG <= dF ** 2
    if F.power_linear is not None:
        rk = rank(F.power_linear.A)
    elif n <= 6:
        rk = generic_rank(jacobian(F.H()))
    else:
        rk = None
    report["rank_JH"] = rk
    if rk is not None:
        report["rank_bound"] = dF ** rk
        report["rank_bound_holds"] = dG <= dF ** rk
    if pair is not None and f_inverse_degree is not None:
        lo, hi = f_inverse_degree, dF * f_inverse_degree
        report["pairing_lower"] = lo
        report["pairing_upper"] = hi
        report["pairing_sandwich_holds"] = lo <= dG <= hi
    return report
