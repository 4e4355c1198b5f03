"""Named, deterministic scenarios and the random corpora behind them."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .inversion import (
    InverseResult,
    RankOneNormalForm,
    degree_bound_report,
    det_identity_check,
    formal_inverse,
    inverse_via_pairing,
    line_injectivity_check,
    nilpotent_inverse_formula,
    rank_one_inverse,
    realize_rank_one,
)
from .linalg import Matrix, inverse
from .pairing import (
    STRONG,
    GZPair,
    extend_with_power,
    extension_tail_inverse,
    gz_lift,
    gz_reduce,
    kernel_translation_check,
)
from .parse import parse_polynomial
from .poly import Polynomial, default_names, scalar, variables
from .polymap import (
    HomogeneousProfile,
    PolyMap,
    PowerLinearData,
    compose_maps,
    constant_kernel,
    detect_power_linear,
    generic_rank,
    is_keller,
    jacobian,
    map_degree,
    map_jacobian_of_H,
    map_nilpotency_index,
    matrix_power,
    nilpotency_index,
)
from .power_linear import trace_minor_check
from .rng import SplitMix64

FURTER_H = (
    "2*x2*x6 - 2*x3^2 - x4*x5",
    "2*x3*x5 - x4*x6",
    "x5*x6",
    "x5^2",
    "x6^2",
    "0",
)
# dimension of the deterministic lift of the Furter map, pinned from the
# first certified run so that changes to the lift are noticed
FURTER_LIFT_DIMENSION = 15


def furter_map() -> PolyMap:
    names = default_names(6)
    X = variables(6)
    return PolyMap([x + parse_polynomial(h, names) for x, h in zip(X, FURTER_H)])


# -- random building blocks -------------------------------------------------

def random_homogeneous(rng: SplitMix64, nvars: int, degree: int, allowed: list[int], terms: int,
                       coeff: int = 3) -> Polynomial:
    """Sparse homogeneous polynomial of ``degree`` in the variables ``allowed``."""
    if not allowed or degree < 0:
        return Polynomial(nvars)
    acc = {}
    for _ in range(terms):
        exps = [0] * nvars
        for _ in range(degree):
            exps[rng.choice(allowed)] += 1
        acc[tuple(exps)] = acc.get(tuple(exps), 0) + rng.nonzero_int(coeff)
    return Polynomial.from_terms(nvars, acc)


def random_polynomial(rng: SplitMix64, nvars: int, max_degree: int, terms: int, min_degree: int = 0,
                      coeff: int = 5, den: int = 1) -> Polynomial:
    acc = {}
    for _ in range(terms):
        d = rng.randint(min_degree, max_degree)
        exps = [0] * nvars
        for _ in range(d):
            if nvars:
                exps[rng.below(nvars)] += 1
        c = scalar(rng.nonzero_int(coeff)) / rng.randint(1, den)
        acc[tuple(exps)] = acc.get(tuple(exps), 0) + c
    return Polynomial.from_terms(nvars, acc)


def random_unimodular(rng: SplitMix64, n: int, moves: int = 3) -> Matrix:
    """Product of transvections I + c E_ij (determinant 1)."""
    rows = [[scalar(1 if i == j else 0) for j in range(n)] for i in range(n)]
    if n < 2:
        return Matrix(rows, n)
    for _ in range(moves):
        i = rng.below(n)
        j = rng.below(n - 1)
        j = j if j < i else j + 1
        c = rng.nonzero_int(2)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return Matrix(rows, n)


def linear_polys(T: Matrix) -> list[Polynomial]:
    return [Polynomial.linear_form(r) for r in T.rows]


def conjugate(F: PolyMap, T: Matrix) -> PolyMap:
    """T^{-1} F(T X)."""
    n = F.n
    TX = linear_polys(T)
    FT = [p.substitute(TX) for p in F.components]
    Tinv = inverse(T)
    return PolyMap([sum_lin(row, FT, n) for row in Tinv.rows])


def sum_lin(row, polys, n) -> Polynomial:
    from .poly import linear_combination

    return linear_combination(row, polys, n)


# -- random Keller maps -----------------------------------------------------

def random_keller_with_inverse(n: int, d: int, steps: int, seed: int, attempts: int = 25) -> tuple[PolyMap, PolyMap]:
    """Keller map of degree <= d and its inverse by reversed composition.

    Each step is T^{-1} E T with E: x_i += p(other variables), p of degrees
    2..d and T a unimodular transvection product.  A step that would push
    the degree above d is redrawn; after ``attempts`` failures it is skipped.
    """
    rng = SplitMix64(seed)
    F = PolyMap.identity(n)
    Finv = PolyMap.identity(n)
    if n < 2 or d < 2:
        return F, Finv
    for _ in range(steps):
        for _ in range(attempts):
            i = rng.below(n)
            p = random_polynomial(rng, n, d, rng.randint(1, 2), min_degree=2, coeff=2)
            p = p.substitute([Polynomial(n) if j == i else x for j, x in enumerate(variables(n))])
            if p.is_zero():
                continue
            T = random_unimodular(rng, n)
            X = variables(n)
            E = PolyMap([x + p if j == i else x for j, x in enumerate(X)])
            Einv = PolyMap([x - p if j == i else x for j, x in enumerate(X)])
            S = conjugate(E, T)
            cand = compose_maps(S, F)
            if map_degree(cand) > d:
                continue
            Sinv = conjugate(Einv, T)
            F = cand
            Finv = compose_maps(Finv, Sinv)
            break
    return F, Finv


def random_keller_generator(n: int, d: int, steps: int, seed: int) -> PolyMap:
    if n < 1 or d < 2 or steps < 0:
        raise ValueError("need n >= 1, d >= 2, steps >= 0")
    return random_keller_with_inverse(n, d, steps, seed)[0]


# -- instance families ------------------------------------------------------

def three_level_map(rng: SplitMix64, n: int, d: int, power_linear: bool, conj: bool) -> PolyMap:
    """Homogeneous H of degree d with JH^3 = 0: variables sit on three levels
    and H_i only involves variables on strictly higher levels."""
    level = [rng.below(3) for _ in range(n)]
    X = variables(n)
    H = []
    rows = []
    for i in range(n):
        higher = [j for j in range(n) if level[j] > level[i]]
        if not higher or rng.chance(1, 6):
            H.append(Polynomial(n))
            rows.append([0] * n)
            continue
        if power_linear:
            row = [rng.randint(-2, 2) if j in higher else 0 for j in range(n)]
            if not any(row):
                row[higher[0]] = 1
            rows.append(row)
            H.append(Polynomial.linear_form(row) ** d)
        else:
            H.append(random_homogeneous(rng, n, d, higher, rng.randint(1, 3)))
    F = PolyMap([x + h for x, h in zip(X, H)])
    if power_linear and not conj:
        F = PolyMap(F.components, PowerLinearData(Matrix(rows, n), (d,) * n))
    if conj:
        F = conjugate(F, random_unimodular(rng, n, rng.randint(1, 3)))
    return F


def kernel_surrogate_holds(F: PolyMap) -> bool:
    JH = jacobian(F.H())
    return generic_rank(JH) == F.n - len(constant_kernel(JH))


def cube_nilpotent_corpus(count: int, seed: int) -> list[PolyMap]:
    """Homogeneous maps with JH^3 = 0 satisfying the kernel surrogate."""
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 5)
        d = rng.randint(2, 3)
        kind = rng.below(3)
        F = three_level_map(rng, n, d, power_linear=kind < 2, conj=kind == 1 or (kind == 2 and rng.chance(1, 2)))
        if all(h.is_zero() for h in F.H()):
            continue
        if kernel_surrogate_holds(F):
            out.append(F)
    return out


def strictly_triangular_data(rng: SplitMix64, n: int, degrees: list[int], permute: bool) -> PowerLinearData:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            if rng.chance(2, 3):
                rows[i][j] = rng.randint(-2, 2)
    if permute:
        perm = rng.shuffle(list(range(n)))
        # P A P^T: row perm[i] of the result is row i of A, same for columns
        new = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                new[perm[i]][perm[j]] = rows[i][j]
        rows = new
        degrees = [degrees[perm.index(k)] for k in range(n)]
    return PowerLinearData(Matrix(rows, n), tuple(degrees))


def rank_one_trace_free_data(rng: SplitMix64, n: int, d: int) -> PowerLinearData:
    """A = u v^T with sum_i u_i^d v_i = 0, so Tr JH = 0 and all minors of size >= 2 vanish."""
    u = [rng.randint(-2, 2) for _ in range(n)]
    if not any(u):
        u[0] = 1
    v = [scalar(rng.randint(-2, 2)) for _ in range(n)]
    j = next(k for k in range(n) if u[k])
    rest = sum(scalar(u[k]) ** d * v[k] for k in range(n) if k != j)
    v[j] = -rest / scalar(u[j]) ** d
    return PowerLinearData(Matrix([[scalar(ui) * vk for vk in v] for ui in u], n), (d,) * n)


def trace_minor_corpus(count: int, seed: int) -> list[PowerLinearData]:
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        kind = len(out) % 3
        n = rng.randint(2, 4)
        if kind == 2:
            out.append(rank_one_trace_free_data(rng, n, rng.randint(2, 3)))
            continue
        top = 3 if n <= 3 else 2
        degrees = [rng.randint(2, top) for _ in range(n)]
        out.append(strictly_triangular_data(rng, n, degrees, permute=kind == 1))
    return out


def profile_instance(rng: SplitMix64, equal_degrees: bool = False) -> tuple[PolyMap, HomogeneousProfile]:
    n = rng.randint(1, 4)
    d0 = rng.randint(2, 3)
    degrees = [d0 if equal_degrees else rng.randint(2, 3) for _ in range(n)]
    X = variables(n)
    H = []
    for i in range(n):
        if rng.chance(1, 5):
            H.append(Polynomial(n))
        else:
            H.append(random_homogeneous(rng, n, degrees[i], list(range(n)), rng.randint(1, 3), coeff=2))
    return PolyMap([x + h for x, h in zip(X, H)]), HomogeneousProfile(tuple(degrees))


def colliding_instance(rng: SplitMix64) -> tuple[PolyMap, HomogeneousProfile, list, object]:
    """Map, point a and lambda with F(a) = F(lambda a) by construction."""
    F, prof = profile_instance(rng)
    n = F.n
    a = [scalar(rng.nonzero_int(3)) for _ in range(n)]
    lam = scalar(rng.choice([2, 3, -2, 1, 1])) / rng.choice([1, 2, 3])
    if lam in (1, -1, 0):
        lam = scalar(2)
    X = variables(n)
    comps = []
    for i, (x, h) in enumerate(zip(X, F.H())):
        d = prof.degrees[i]
        geo = sum(lam ** k for k in range(d))
        target = -a[i] / geo
        exps = [0] * n
        exps[i] = d
        mono = Polynomial.from_terms(n, {tuple(exps): 1})
        h = h + mono.scale((target - h.evaluate(a)) / mono.evaluate(a))
        comps.append(x + h)
    return PolyMap(comps), prof, a, lam


def line_collision_corpus(count: int, seed: int) -> list[tuple[PolyMap, HomogeneousProfile, list, object]]:
    rng = SplitMix64(seed)
    out = []
    for k in range(count):
        if k % 2 == 0:
            out.append(colliding_instance(rng))
            continue
        F, prof = profile_instance(rng)
        n = F.n
        a = [scalar(rng.randint(-3, 3)) for _ in range(n)]
        lam = rng.rational(4, 3)
        if lam == 1:
            lam = scalar(-1)
        out.append((F, prof, a, lam))
    return out


def equal_degree_corpus(count: int, seed: int) -> list[PolyMap]:
    """Half homogeneous Keller maps (nilpotent JH), half random ones."""
    rng = SplitMix64(seed)
    out = []
    for k in range(count):
        if k % 2 == 0:
            n = rng.randint(2, 4)
            d = rng.randint(2, 3)
            F = three_level_map(rng, n, d, power_linear=rng.chance(1, 2), conj=rng.chance(1, 2))
            out.append(F)
        else:
            F, prof = profile_instance(rng, equal_degrees=True)
            out.append(F)
    return out


def random_normal_form(rng: SplitMix64, n: int, lam) -> RankOneNormalForm:
    s = rng.randint(0, n - 1)
    c = [rng.rational(3, 2) for _ in range(s)]
    g = random_polynomial(rng, s, rng.randint(0, 3), rng.randint(0, 3), coeff=3) if s else Polynomial.constant(0, rng.randint(-2, 2))
    g = g.extend(n) if s else Polynomial.constant(n, g.constant_term())
    tail = [random_polynomial(rng, 1, rng.randint(0, 3), rng.randint(0, 3), coeff=3) for _ in range(n - s - 1)]
    return RankOneNormalForm(n, s, c, lam, g, tuple(tail))


def rank_one_corpus(count: int, seed: int) -> list[RankOneNormalForm]:
    rng = SplitMix64(seed)
    lams = [scalar(0), scalar(1), scalar(2), scalar(-1) / 2]
    return [random_normal_form(rng, rng.randint(1, 5), lams[k % 4]) for k in range(count)]


def invertible_small_maps(count: int, seed: int, rmax: int = 3) -> list[tuple[PolyMap, PolyMap]]:
    """Keller maps with known inverses and no linear part, for lifting."""
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, rmax)
        if r == 1:
            # in dimension one the only Keller maps are translations; lift
            # f = x + x^2 instead, whose formal inverse is not polynomial
            continue
        # cubic maps in dimension 3 lift to dimensions near 30, where the
        # degree-9 inverse of F has far too many terms to build
        d = 2 if r == 3 else rng.randint(2, 3)
        F, Finv = random_keller_with_inverse(r, d, rng.randint(1, 2), rng.next_u64())
        if F.is_identity():
            continue
        out.append((F, Finv))
    return out


def lifted_invertible_pairs(count: int, seed: int) -> list[tuple[GZPair, PolyMap]]:
    """Lifts of small Keller maps with their known inverses.

    Only pairs whose inverse is cheap to write down are kept: the inverse
    of F has degree up to d * deg f^{-1} in n variables, so pairs with
    d * deg f^{-1} > 8 or n > 12 are skipped.
    """
    out = []
    for f, finv in invertible_small_maps(4 * count, seed):
        pair = gz_lift(f)
        if map_degree(pair.F) * map_degree(finv) > 8 or pair.n > 12:
            continue
        out.append((pair, finv))
        if len(out) == count:
            break
    return out


def nilpotent_small_maps(count: int, seed: int) -> list[PolyMap]:
    """Sparse maps x + h for lifting: strictly triangular or three-level
    (nilpotent Jh), sometimes conjugated by one transvection, and in
    dimension one x + h(x) (Jh not nilpotent)."""
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, 3)
        if r == 1:
            X = variables(1)
            F = PolyMap([X[0] + random_polynomial(rng, 1, 3, 2, min_degree=2, coeff=2)])
        elif rng.chance(1, 2):
            F = three_level_map(rng, r, rng.randint(2, 3), power_linear=False, conj=False)
        else:
            X = variables(r)
            comps = []
            for i in range(r):
                later = r - i - 1
                h = random_polynomial(rng, later, 3, rng.randint(1, 2), min_degree=2, coeff=2) if later else Polynomial(0)
                comps.append(X[i] + h.extend(r, offset=i + 1))
            F = PolyMap(comps)
        if r > 1 and rng.chance(1, 3):
            F = conjugate(F, random_unimodular(rng, r, 1))
        if not F.is_identity():
            out.append(F)
    return out


# -- scenario machinery -----------------------------------------------------

@dataclass
class Expectation:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ScenarioResult:
    name: str
    expectations: list[Expectation] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.expectations)

    def expect(self, name: str, ok: bool, detail: str = "") -> bool:
        self.expectations.append(Expectation(name, bool(ok), detail))
        return bool(ok)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "expectations": [{"name": e.name, "passed": e.passed, "detail": e.detail} for e in self.expectations],
            "values": self.values,
        }


class ScenarioAbort(Exception):
    pass


def _require(res: ScenarioResult, name: str, ok: bool, detail: str = ""):
    if not res.expect(name, ok, detail):
        raise ScenarioAbort(name)


def furter_pipeline() -> ScenarioResult:
    res = ScenarioResult("furter")
    try:
        _furter(res)
    except ScenarioAbort:
        pass
    return res


def _furter(res: ScenarioResult) -> None:
    f = furter_map()
    Jh = jacobian(f.H())
    k_h = nilpotency_index(Jh)
    res.values["jh_nilpotency_index"] = k_h
    _require(res, "Jh^3 = 0 and Jh^2 != 0", k_h == 3, f"index {k_h}")
    inv = formal_inverse(f)
    _require(res, "f is invertible (certified)", inv.invertible and inv.certified)
    deg1 = inv.inverse.components[0].degree()
    res.values["deg_f_inverse_1"] = deg1
    res.values["f_inverse"] = inv.inverse.to_strings()
    _require(res, "deg (f^-1)_1 = 6", deg1 == 6, f"got {deg1}")

    pair = gz_lift(f)
    res.values["lift_dimension"] = pair.n
    res.values["B"] = pair.B.to_strings()
    _require(res, "lift is strongly paired", pair.status == STRONG, pair.status)
    _require(res, "lift dimension matches pinned value", pair.n == FURTER_LIFT_DIMENSION, f"n = {pair.n}")
    data = detect_power_linear(pair.F)
    _require(res, "F is homogeneous power linear of degree 2", data is not None and set(data.d) == {2})
    k_H = map_nilpotency_index(pair.F)
    res.values["JH_nilpotency_index"] = k_H
    _require(res, "JH nilpotent with index <= 4", k_H is not None and k_H <= 4, f"index {k_H}")
    _require(res, "kernel translation properties hold", kernel_translation_check(pair.F, pair.B, pair.C))

    ext = extend_with_power(pair, 1, 2)
    res.values["extended_dimension"] = ext.n
    _require(res, "extension stays strongly paired", ext.status == STRONG, ext.status)
    JHt = map_jacobian_of_H(ext.F)
    k_t = nilpotency_index(JHt)
    res.values["JH_ext_nilpotency_index"] = k_t
    _require(res, "JH~^4 = 0", k_t is not None and k_t <= 4, f"index {k_t}")
    _require(res, "JH~^3 != 0", not matrix_power(JHt, 3).is_zero())

    G = inverse_via_pairing(ext, inv.inverse)
    _require(res, "F~ o F~^-1 = X exactly", compose_maps(ext.F, G).is_identity())
    degG = map_degree(G)
    res.values["deg_F_ext_inverse"] = degG
    _require(res, "deg F~^-1 >= 12 > 8", degG >= 12 > 8, f"degree {degG}")
    tail = extension_tail_inverse(pair, inv.inverse, 1, 2)
    _require(res, "last inverse component matches x_{n+1} - (f^-1(BX))_1^2", G.components[-1] == tail)
    _require(res, "last inverse component has degree 2 * 6", tail.degree() == 12, f"degree {tail.degree()}")
    report = degree_bound_report(ext.F, InverseResult(G, None, True, "pairing"))
    res.values["degree_report"] = report
    _require(res, "degree bound (deg F)^k for JH^{k+1} = 0 fails at k = 3", report["nilpotency_bound_holds"] is False)
    _require(res, "BCW bound holds", report["bcw_holds"])


def _trace_minor_scenario(name: str, kinds: Iterable[int], seed: int, count: int) -> ScenarioResult:
    res = ScenarioResult(name)
    rng = SplitMix64(seed)
    done = 0
    for _ in range(count):
        for kind in kinds:
            n = rng.randint(2, 4)
            top = 3 if n <= 3 else 2
            degrees = [rng.randint(2, top) for _ in range(n)]
            data = strictly_triangular_data(rng, n, degrees, permute=kind == 1)
            rep = trace_minor_check(data)
            ok = rep.hypotheses_hold and rep.inverse is not None and rep.inverse.certified
            res.expect(f"instance {done}: hypotheses hold and inverse certified", ok,
                       f"n={n} d={list(data.d)} deg inverse {rep.inverse.degree if rep.inverse else None}")
            done += 1
    res.values["instances"] = done
    return res


def scenario_trace_minor_triangular(seed: int) -> ScenarioResult:
    return _trace_minor_scenario("trace-minors-triangular", [0], seed, 5)


def scenario_trace_minor_permuted(seed: int) -> ScenarioResult:
    return _trace_minor_scenario("trace-minors-permuted", [1], seed + 1, 5)


def scenario_cube_nilpotent(seed: int) -> ScenarioResult:
    res = ScenarioResult("cube-nilpotent-formula")
    for k, F in enumerate(cube_nilpotent_corpus(12, seed)):
        out = nilpotent_inverse_formula(F)
        dF = map_degree(F)
        res.expect(f"instance {k}: X - H(X - H) certified", out.certified)
        res.expect(f"instance {k}: deg F^-1 <= (deg F)^2", out.degree <= dF ** 2, f"{out.degree} vs {dF}^2")
    return res


def scenario_line_collisions(seed: int) -> ScenarioResult:
    res = ScenarioResult("line-collisions")
    for k, (F, prof, a, lam) in enumerate(line_collision_corpus(20, seed)):
        lhs, rhs = line_injectivity_check(F, a, lam, prof)
        res.expect(f"instance {k}: F(a) = F(lam a) iff (I + D JH|a) a = 0", lhs == rhs, f"lhs={lhs} rhs={rhs}")
    for k, F in enumerate(equal_degree_corpus(8, seed + 7)):
        keller = is_keller(F)
        det = det_identity_check(F)
        res.expect(f"equal degrees {k}: Keller iff det(I + D JH) = 1", keller == det.holds)
    return res


def kh_map(rng: SplitMix64, n: int) -> PolyMap:
    """F = X + H with every H_i a polynomial in one linear form h and det JF = 1."""
    a = [rng.randint(-2, 2) for _ in range(n)]
    if not any(a):
        a[0] = 1
    hform = Polynomial.linear_form(a)
    ps = [random_polynomial(rng, 1, 3, 2, min_degree=2, coeff=3) for _ in range(n)]
    # force sum a_i p_i = 0 so that det JF = 1 + sum a_i p_i'(h) = 1
    j = next(k for k in range(n) if a[k])
    rest = Polynomial(1)
    for k in range(n):
        if k != j:
            rest = rest + ps[k].scale(a[k])
    ps[j] = rest.scale(scalar(-1) / a[j])
    X = variables(n)
    return PolyMap([x + p.substitute([hform]) for x, p in zip(X, ps)])


def scenario_kh_reduction(seed: int) -> ScenarioResult:
    res = ScenarioResult("kh-rank-one-reduction")
    rng = SplitMix64(seed)
    for k in range(6):
        n = rng.randint(2, 4)
        F = kh_map(rng, n)
        res.expect(f"instance {k}: Keller", is_keller(F))
        if F.is_identity():
            continue
        pair = gz_reduce(F, 1)
        res.expect(f"instance {k}: paired with a map in dimension 1", pair.status in ("weak", "strong"), pair.status)
        finv = formal_inverse(pair.f)
        res.expect(f"instance {k}: f invertible", finv.certified)
        G = inverse_via_pairing(pair, finv.inverse)
        res.expect(f"instance {k}: F inverted through the pairing", compose_maps(F, G).is_identity())
    return res


def scenario_degree_sandwich(seed: int) -> ScenarioResult:
    res = ScenarioResult("degree-sandwich")
    for k, (pair, finv) in enumerate(lifted_invertible_pairs(5, seed)):
        res.expect(f"instance {k}: lift strongly paired", pair.status == STRONG, pair.status)
        G = inverse_via_pairing(pair, finv)
        dg, dG, d = map_degree(finv), map_degree(G), map_degree(pair.F)
        res.expect(f"instance {k}: deg f^-1 <= deg F^-1 <= d deg f^-1", dg <= dG <= d * dg, f"{dg} <= {dG} <= {d}*{dg}")
    return res


def scenario_rank_one(seed: int) -> ScenarioResult:
    res = ScenarioResult("rank-one-normal-form")
    for k, nf in enumerate(rank_one_corpus(12, seed)):
        F = realize_rank_one(nf)
        G = rank_one_inverse(nf)
        res.expect(f"instance {k}: closed-form inverse certified", compose_maps(F, G).is_identity())
        res.expect(f"instance {k}: deg F^-1 = deg F", map_degree(G) == map_degree(F), f"{map_degree(G)} vs {map_degree(F)}")
    return res


SCENARIOS: dict[str, Callable[[int], ScenarioResult]] = {
    "furter": lambda seed: furter_pipeline(),
    "trace-minors-triangular": scenario_trace_minor_triangular,
    "trace-minors-permuted": scenario_trace_minor_permuted,
    "cube-nilpotent-formula": scenario_cube_nilpotent,
    "line-collisions": scenario_line_collisions,
    "kh-rank-one-reduction": scenario_kh_reduction,
    "degree-sandwich": scenario_degree_sandwich,
    "rank-one-normal-form": scenario_rank_one,
}


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def run_suite(pattern: str | None = None, seed: int = 0,
              scenarios: dict[str, Callable[[int], ScenarioResult]] | None = None) -> dict:
    """Run every scenario whose name matches ``pattern`` (substring or glob)."""
    registry = SCENARIOS if scenarios is None else scenarios
    results = []
    for name in sorted(registry):
        if pattern and pattern not in name and not fnmatch.fnmatch(name, pattern):
            continue
        try:
            res = registry[name](seed)
        except Exception as exc:  # a crashing scenario is a failed scenario
            res = ScenarioResult(name)
            res.expect("scenario ran to completion", False, f"{type(exc).__name__}: {exc}")
        res.name = name
        results.append(_jsonable(res.to_json()))
    return {
        "seed": seed,
        "filter": pattern,
        "scenarios": results,
        "total": len(results),
        "failed": [r["name"] for r in results if not r["passed"]],
        "passed": all(r["passed"] for r in results),
    }
