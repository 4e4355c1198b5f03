"""Power-linear maps X + (AX)^{*d} and Waring decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Sequence

from .linalg import MinorScan, principal_minor_scan, rank
from .poly import Polynomial, Scalar, scalar, variables
from .polymap import PolyMap, PowerLinearData, is_keller

__all__ = [
    "PowerLinearData",
    "WaringTerm",
    "realize_map",
    "trace_JH",
    "trace_minor_check",
    "cubic_linear_diagnostics",
    "waring_decompose",
    "expand_waring",
]


def realize_map(data: PowerLinearData) -> PolyMap:
    """F = X + H with H_i = (A_i X)^{d_i}; zero rows give H_i = 0."""
    n = data.n
    X = variables(n)
    comps = []
    for x, row, e in zip(X, data.A.rows, data.d):
        if any(row):
            comps.append(x + Polynomial.linear_form(row) ** e)
        else:
            comps.append(x)
    return PolyMap(comps, data)


def trace_JH(data: PowerLinearData) -> Polynomial:
    """Tr JH = sum_i d_i A_ii (A_i X)^{d_i - 1}."""
    n = data.n
    acc = Polynomial(n)
    for i, (row, e) in enumerate(zip(data.A.rows, data.d)):
        if row[i]:
            acc = acc + (Polynomial.linear_form(row) ** (e - 1)).scale(e * row[i])
    return acc


@dataclass
class TraceMinorReport:
    trace_zero: bool
    minors: MinorScan | None  # None when n = 1: no sizes to scan
    hypotheses_hold: bool
    inverse: object = None  # InverseResult once both hypotheses hold

    @property
    def minors_vanish(self) -> bool:
        return self.minors is None or self.minors.all_vanish


def trace_minor_check(data: PowerLinearData, bound: int | None = None) -> TraceMinorReport:
    """Check Tr JH = 0 and vanishing principal minors of sizes 2..n, then
    confirm invertibility independently by formal inversion."""
    from .inversion import formal_inverse

    n = data.n
    trace_zero = trace_JH(data).is_zero()
    scan = principal_minor_scan(data.A, 2, n) if n >= 2 else None
    holds = trace_zero and (scan is None or scan.all_vanish)
    report = TraceMinorReport(trace_zero, scan, holds)
    if holds:
        if bound is None:
            bound = max(data.d) ** (n - 1) if n > 1 else 1
        report.inverse = formal_inverse(realize_map(data), bound=max(bound, 1))
    return report


def cubic_linear_diagnostics(data: PowerLinearData) -> dict:
    """Hypotheses of the tameness and triangularizability results for cubic-linear maps.

    Conclusions (tameness, linear triangularizability) are not computed here;
    only whether their inputs hold is reported.
    """
    A = data.A
    n = data.n
    r = rank(A)
    keller = is_keller(realize_map(data))
    cubic = all(e == 3 for e in data.d)
    hi = n - 4
    if hi >= 2:
        minors_vanish = principal_minor_scan(A, 2, hi).all_vanish
    else:
        minors_vanish = None  # empty range
    diag_nonzero = all(A.rows[i][i] for i in range(n))
    rank_ok = r <= n // 2
    return {
        "n": n,
        "rank": r,
        "corank": n - r,
        "keller": keller,
        "cubic_linear": cubic,
        "small_minor_range": [2, hi] if hi >= 2 else None,
        "small_minors_vanish": minors_vanish,
        "small_minors_hypothesis": cubic and keller and minors_vanish is not False,
        "diagonal_nonzero": diag_nonzero,
        "rank_at_most_half": rank_ok,
        "diagonal_hypothesis": cubic and keller and diag_nonzero,
        "rank_bound_applicable": keller and diag_nonzero,
        "note": "hypotheses only; tameness and triangularizability are external results",
    }


# -- Waring decomposition ---------------------------------------------------

@dataclass(frozen=True)
class WaringTerm:
    coefficient: Scalar
    linear_form: tuple[Scalar, ...]
    exponent: int

    def expand(self) -> Polynomial:
        return (Polynomial.linear_form(self.linear_form) ** self.exponent).scale(self.coefficient)


def _normalize(v: Sequence[int]) -> tuple[tuple[Scalar, ...], Scalar]:
    lead = next(scalar(a) for a in v if a)
    return tuple(scalar(a) / lead for a in v), lead


def _monomial_terms(exps: Sequence[int]) -> list[tuple[tuple[Scalar, ...], Scalar]]:
    """x^exps = sum over signs s (s_1 = +1) of s_2..s_e (s . z)^e / (2^{e-1} e!),
    z listing each variable with multiplicity.  Returns (form, weight) pairs."""
    e = sum(exps)
    factors = [j for j, a in enumerate(exps) for _ in range(a)]
    n = len(exps)
    scale = scalar(1) / (2 ** (e - 1) * factorial(e))
    acc: dict[tuple[int, ...], int] = {}
    for signs in itertools.product((1, -1), repeat=e - 1):
        signs = (1,) + signs
        v = [0] * n
        sgn = 1
        for j, s in zip(factors, signs):
            v[j] += s
            sgn *= s
        key = tuple(v)
        if any(key):
            acc[key] = acc.get(key, 0) + sgn
    out = []
    for v, w in acc.items():
        if w:
            out.append((tuple(v), scale * w))
    return out


def waring_decompose(p: Polynomial) -> list[WaringTerm]:
    """Write homogeneous p of degree d >= 2 as sum c_j (l_j . x)^d.

    Each monomial goes through the signed polarization identity; linear
    forms are normalised to a leading 1 and equal forms merged.
    """
    if not p.is_homogeneous():
        raise ValueError("Waring decomposition needs a homogeneous polynomial")
    if p.is_zero():
        return []
    d = p.degree()
    if d < 2:
        raise ValueError("Waring decomposition needs degree >= 2")
    merged: dict[tuple[Scalar, ...], Scalar] = {}
    for exps, c in p.terms():
        for v, w in _monomial_terms(exps):
            form, lead = _normalize(v)
            merged[form] = merged.get(form, scalar(0)) + c * w * lead ** d
    return [WaringTerm(c, form, d) for form, c in merged.items() if c]


def expand_waring(terms: Sequence[WaringTerm], nvars: int) -> Polynomial:
    acc = Polynomial(nvars)
    for t in terms:
        acc = acc + t.expand()
    return acc
