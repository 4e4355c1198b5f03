import pytest
from hypothesis import given, strategies as st

from druzkowski.parse import parse_polynomial
from druzkowski.poly import (
    NEG_INF,
    ArityError,
    DegreeOverflowError,
    Polynomial,
    default_names,
    pack,
    scalar,
    unpack,
    variables,
)

from conftest import points, polynomials

N6 = default_names(6)
FURTER_H1 = "2*x2*x6 - 2*x3^2 - x4*x5"


def P(text, n=3):
    return parse_polynomial(text, default_names(n))


def test_difference_of_squares():
    x1, x2 = variables(2)
    assert (x1 + x2) * (x1 - x2) == x1 ** 2 - x2 ** 2
    assert ((x1 + x2) * (x1 - x2)).to_str() == "x1^2 - x2^2"


def test_additive_identity():
    p = P("x1^2 - 3*x2 + 1/2")
    assert p + Polynomial(3) == p
    assert Polynomial(3) + p == p


def test_square_expansion_against_evaluation(rng):
    l = P("x1 + x2 - x3")
    sq = l ** 2
    assert len(sq) == 6
    assert sq.evaluate([1, 2, 3]) == 0
    for _ in range(10):
        pt = [rng.rational(9, 7) for _ in range(3)]
        assert sq.evaluate(pt) == l.evaluate(pt) ** 2


def test_arity_mismatch():
    with pytest.raises(ArityError):
        Polynomial.variable(2, 0) + Polynomial.variable(3, 0)
    with pytest.raises(ArityError):
        Polynomial.variable(2, 0) * Polynomial.variable(3, 0)


def test_derivatives():
    assert P("x2^2*x3").diff(1) == P("2*x2*x3")
    assert P("7").diff(0).is_zero()
    assert parse_polynomial(FURTER_H1, N6).diff(5) == parse_polynomial("2*x2", N6)
    with pytest.raises(IndexError):
        P("x1").diff(3)


def test_substitution_examples():
    x1, x2 = variables(2)
    assert (x1 ** 2).substitute([x1 + x2, x2]) == P("x1^2 + 2*x1*x2 + x2^2", 2)
    p = P("x1^3 - x2*x3 + 5")
    assert p.substitute(variables(3)) == p
    h1 = parse_polynomial(FURTER_H1, N6)
    ones = [Polynomial.constant(6, 1)] * 6
    assert h1.substitute(ones) == Polynomial.constant(6, -1)
    with pytest.raises(ArityError):
        p.substitute(variables(3)[:2])


def test_degree_and_parts():
    p = P("x1^2 + x2", 2)
    assert p.degree() == 2
    assert p.homogeneous_parts() == {1: P("x2", 2), 2: P("x1^2", 2)}
    z = Polynomial(2)
    assert z.degree() is NEG_INF
    assert z.homogeneous_parts() == {}
    h1 = parse_polynomial(FURTER_H1, N6)
    assert h1.is_homogeneous() and list(h1.homogeneous_parts()) == [2]


def test_minus_infinity_refuses_arithmetic():
    with pytest.raises(TypeError):
        Polynomial(2).degree() + 1
    assert NEG_INF < 0 and not NEG_INF > -10**9


def test_evaluate_examples():
    assert P("(x1 + x2)^2", 2).evaluate([1, 2]) == 9
    p = P("3*x1*x2 - 5/3 + x3^4")
    assert p.evaluate([0, 0, 0]) == p.constant_term() == scalar("-5/3")
    h4 = parse_polynomial("x5^2", N6)
    assert h4.evaluate([0, 0, 0, 0, 3, 0]) == 9
    with pytest.raises(ArityError):
        p.evaluate([1, 2])


def test_exponent_overflow_is_an_error():
    with pytest.raises(DegreeOverflowError):
        pack([2 ** 32, 0])
    x = Polynomial.variable(1, 0)
    big = x ** (2 ** 31)
    with pytest.raises(DegreeOverflowError):
        big * big


def test_pack_orders_by_degree_then_x1():
    keys = sorted(pack(e) for e in [(0, 2), (1, 0), (2, 0), (1, 1), (0, 0)])
    assert [unpack(k, 2) for k in keys] == [(0, 0), (1, 0), (0, 2), (1, 1), (2, 0)]


def test_printing_order_and_format():
    assert P("x2^2 + x1").to_str() == "x1 + x2^2"
    assert P("-x1 + 3/2*x2*x3 - 1").to_str() == "-1 - x1 + 3/2*x2*x3"
    assert P("x1*x2 + x1^2 + x2^2", 2).to_str() == "x1^2 + x1*x2 + x2^2"
    assert Polynomial(3).to_str() == "0"


def test_floats_rejected():
    with pytest.raises(TypeError):
        scalar(0.5)


def test_truncate_and_mul_with_cap():
    p = P("x1 + x1^2 + x1^3", 1)
    assert p.truncate(2) == P("x1 + x1^2", 1)
    assert p.mul(p, maxdeg=3) == (p * p).truncate(3)
    assert p.power(3, maxdeg=4) == (p ** 3).truncate(4)


def test_extend_shifts_variables():
    p = P("x1^2*x2", 2)
    assert p.extend(4, offset=1) == parse_polynomial("x2^2*x3", default_names(4))


@given(polynomials(), polynomials())
def test_no_zero_coefficients_stored(p, q):
    for s in (p + q, p - q, p * q):
        assert all(c != 0 for _, c in s.terms())
    assert (p - p).is_zero()


@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@given(polynomials(), polynomials(), points())
def test_evaluation_is_a_homomorphism(p, q, a):
    assert (p * q).evaluate(a) == p.evaluate(a) * q.evaluate(a)
    assert (p + q).evaluate(a) == p.evaluate(a) + q.evaluate(a)


@given(polynomials(max_degree=3), st.lists(polynomials(max_degree=2, max_terms=3), min_size=3, max_size=3), st.integers(0, 2))
def test_chain_rule(p, g, j):
    lhs = p.substitute(g).diff(j)
    rhs = Polynomial(3)
    for k in range(3):
        rhs = rhs + p.diff(k).substitute(g) * g[k].diff(j)
    assert lhs == rhs


@given(polynomials(max_degree=3), st.lists(polynomials(max_degree=2, max_terms=3), min_size=3, max_size=3), points())
def test_substitution_agrees_with_evaluation(p, g, a):
    assert p.substitute(g).evaluate(a) == p.evaluate([gi.evaluate(a) for gi in g])


@given(polynomials(max_degree=4), st.integers(1, 4))
def test_euler_identity(p, d):
    p = p.homogeneous_part(d)
    X = variables(3)
    euler = Polynomial(3)
    for j in range(3):
        euler = euler + X[j] * p.diff(j)
    assert euler == p.scale(d)


@given(polynomials())
def test_parts_sum_back(p):
    total = Polynomial(3)
    for deg, part in p.homogeneous_parts().items():
        assert part.is_homogeneous() and part.degree() == deg
        total = total + part
    assert total == p
