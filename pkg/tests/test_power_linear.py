import pytest

from druzkowski.casebook import FURTER_H, random_homogeneous, strictly_triangular_data, trace_minor_corpus
from druzkowski.inversion import certify_inverse, formal_inverse
from druzkowski.linalg import Matrix
from druzkowski.parse import parse_polynomial
from druzkowski.poly import Polynomial, default_names, scalar
from druzkowski.polymap import PolyMap, PowerLinearData, compose_maps, jacobian
from druzkowski.power_linear import (
    WaringTerm,
    cubic_linear_diagnostics,
    expand_waring,
    realize_map,
    trace_JH,
    trace_minor_check,
    waring_decompose,
)
from druzkowski.rng import SplitMix64


def data(rows, d):
    return PowerLinearData(Matrix([[scalar(v) for v in r] for r in rows]), d)


def strings(F):
    return F.to_strings()


def test_realize_examples():
    assert realize_map(data([[0, 0], [0, 0]], (2, 2))).is_identity()
    assert strings(realize_map(data([[0, 0], [1, 0]], (3, 3)))) == ["x1", "x2 + x1^3"]
    F = realize_map(data([[1, 1], [2, 2]], (2, 2)))
    names = default_names(2)
    assert F[0] == parse_polynomial("x1 + (x1 + x2)^2", names)
    assert F[1] == parse_polynomial("x2 + 4*(x1 + x2)^2", names)


def test_data_validation():
    with pytest.raises(ValueError):
        data([[0, 1], [0, 0]], (2, 1))
    with pytest.raises(ValueError):
        data([[0, 1]], (2,))


def test_trace_minor_triangular():
    rep = trace_minor_check(data([[0, 0, 0], [1, 0, 0], [2, -1, 0]], (3, 3, 3)))
    assert rep.trace_zero and rep.minors_vanish and rep.hypotheses_hold
    assert rep.inverse.certified
    assert rep.inverse.degree <= 9


def test_trace_minor_identity_fails():
    rep = trace_minor_check(data([[1, 0], [0, 1]], (3, 3)))
    assert not rep.trace_zero
    assert not rep.hypotheses_hold
    assert rep.inverse is None


def test_trace_minor_permuted():
    rng = SplitMix64(3)
    for _ in range(10):
        D = strictly_triangular_data(rng, 4, [3, 3, 2, 3], permute=True)
        rep = trace_minor_check(D)
        assert rep.hypotheses_hold
        F = realize_map(D)
        assert compose_maps(F, rep.inverse.inverse).is_identity()


def test_trace_minor_corpus_inverses_within_bound():
    for D in trace_minor_corpus(8, 1):
        rep = trace_minor_check(D)
        assert rep.hypotheses_hold
        assert rep.inverse.certified
        assert rep.inverse.degree <= max(D.d) ** (D.n - 1)


def test_trace_grouped_by_degree():
    # Tr JH vanishes iff each same-degree group of the trace vanishes
    rng = SplitMix64(8)
    for _ in range(40):
        n = rng.randint(2, 4)
        rows = [[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]
        d = tuple(rng.randint(2, 3) for _ in range(n))
        D = data(rows, d)
        groups = {}
        for i in range(n):
            if D.A.rows[i][i]:
                term = (Polynomial.linear_form(D.A.rows[i]) ** (d[i] - 1)).scale(d[i] * D.A.rows[i][i])
                groups[d[i]] = groups.get(d[i], Polynomial(n)) + term
        assert trace_JH(D).is_zero() == all(g.is_zero() for g in groups.values())
        assert trace_JH(D) == jacobian(realize_map(D).H()).trace()


def test_cubic_linear_diagnostics():
    n = 6
    rows = [[1 if j == i - 1 else 0 for j in range(n)] for i in range(n)]
    rep = cubic_linear_diagnostics(data(rows, (3,) * n))
    assert rep["small_minor_range"] == [2, 2]
    assert rep["small_minors_vanish"] is True
    assert rep["diagonal_nonzero"] is False
    assert rep["keller"] is True

    rep = cubic_linear_diagnostics(data([[int(i == j) for j in range(4)] for i in range(4)], (3,) * 4))
    assert rep["diagonal_nonzero"] is True
    assert rep["rank"] == 4 and rep["rank_at_most_half"] is False
    assert rep["keller"] is False
    assert rep["rank_bound_applicable"] is False


def test_cubic_linear_rank_on_keller_instance():
    # A with nonzero diagonal, A^2 = 0 after sign tweak: x1 - x2 twice gives a Keller map
    D = data([[1, -1], [1, -1]], (3, 3))
    rep = cubic_linear_diagnostics(D)
    assert rep["keller"] and rep["diagonal_nonzero"]
    assert rep["rank"] <= D.n // 2 and rep["rank_at_most_half"]


def test_waring_examples():
    terms = waring_decompose(parse_polynomial("x1*x2", default_names(2)))
    assert sorted((t.linear_form, t.coefficient) for t in terms) == [
        ((1, -1), scalar("-1/4")),
        ((1, 1), scalar("1/4")),
    ]
    assert waring_decompose(parse_polynomial("x1^2", default_names(2))) == [WaringTerm(scalar(1), (1, 0), 2)]
    h1 = parse_polynomial(FURTER_H[0], default_names(6))
    terms = waring_decompose(h1)
    assert len(terms) <= 5
    assert expand_waring(terms, 6) == h1
    assert all(t.linear_form[next(i for i, v in enumerate(t.linear_form) if v)] == 1 for t in terms)


def test_waring_errors():
    with pytest.raises(ValueError):
        waring_decompose(parse_polynomial("x1^2 + x2", default_names(2)))
    with pytest.raises(ValueError):
        waring_decompose(parse_polynomial("x1", default_names(2)))
    assert waring_decompose(Polynomial(2)) == []


def test_waring_re_expansion_random():
    rng = SplitMix64(200)
    for _ in range(200):
        r = rng.randint(1, 4)
        d = rng.randint(2, 4)
        p = random_homogeneous(rng, r, d, list(range(r)), rng.randint(1, 4), coeff=5)
        assert expand_waring(waring_decompose(p), r) == p


def test_formal_inverse_of_realized_triangular():
    F = realize_map(data([[0, 0], [1, 0]], (3, 3)))
    G = formal_inverse(F).inverse
    assert strings(G) == ["x1", "x2 - x1^3"]
    assert certify_inverse(F, G)
    assert isinstance(F, PolyMap)
