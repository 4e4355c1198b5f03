import pytest
from hypothesis import given

from druzkowski.parse import (
    ParseError,
    parse_map_text,
    parse_matrix_text,
    parse_polynomial,
    parse_power_linear_text,
    render_map_text,
    render_matrix_text,
    render_polynomial,
)
from druzkowski.poly import Polynomial, default_names, scalar

from conftest import polynomials

NAMES = default_names(3)


def test_expansion_with_rational_literal():
    p = parse_polynomial("x1 + (x2 + 3/2*x3)^2", NAMES)
    expected = Polynomial.from_terms(3, {(1, 0, 0): 1, (0, 2, 0): 1, (0, 1, 1): 3, (0, 0, 2): scalar("9/4")})
    assert p == expected


def test_zero():
    assert parse_polynomial("0", NAMES).is_zero()


def test_precedence_and_unary_minus():
    assert parse_polynomial("-x1^2", NAMES) == Polynomial.from_terms(3, {(2, 0, 0): -1})
    assert parse_polynomial("2*x1^2*3", NAMES) == Polynomial.from_terms(3, {(2, 0, 0): 6})
    assert parse_polynomial("--x1", NAMES) == parse_polynomial("x1", NAMES)
    assert parse_polynomial("x1 - x2 - x3", NAMES) == parse_polynomial("x1 - (x2 + x3)", NAMES)


def test_comments_and_whitespace():
    assert parse_polynomial("  x1   *x2 # trailing note", NAMES) == parse_polynomial("x1*x2", NAMES)


@pytest.mark.parametrize(
    "text, col",
    [("x1 + ", 6), ("x1 + y", 6), ("x1 / 0", 4), ("x1 ^ x2", 6), ("(x1 + x2", 9), ("x1 $ x2", 4)],
)
def test_errors_carry_position(text, col):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, NAMES)
    assert info.value.line == 1
    assert info.value.col == col


def test_division_by_polynomial_rejected():
    with pytest.raises(ParseError):
        parse_polynomial("x1 / x2", NAMES)


def test_unknown_variable_message():
    with pytest.raises(ParseError, match="unknown variable 'y'"):
        parse_polynomial("y + 1", NAMES)


@given(polynomials(nvars=3, max_degree=5, max_terms=8))
def test_round_trip(p):
    assert parse_polynomial(render_polynomial(p), NAMES) == p
    assert render_polynomial(parse_polynomial(render_polynomial(p), NAMES)) == render_polynomial(p)


def test_custom_names_round_trip():
    names = ["u", "v"]
    p = parse_polynomial("u^2*v - 1/3*v", names)
    assert render_polynomial(p, names) == "-1/3*v + u^2*v"
    assert parse_polynomial(render_polynomial(p, names), names) == p


def test_map_file_round_trip():
    text = "# a map\nvars a b\nF2 = b\nF1 = a + b^2  # elementary\n"
    names, comps = parse_map_text(text)
    assert names == ["a", "b"]
    assert [c.to_str(names) for c in comps] == ["a + b^2", "b"]
    again = parse_map_text(render_map_text(comps, names))
    assert again == (names, comps)


@pytest.mark.parametrize(
    "text, line",
    [
        ("F1 = x1\n", 1),
        ("vars x1 x2\nF1 = x1\n", 1),
        ("vars x1\nF1 = x1\nF1 = x1\n", 3),
        ("vars x1\nF2 = x1\n", 2),
        ("vars x1\nF1 = x1 +\n", 2),
        ("vars x1 x1\nF1 = x1\n", 1),
    ],
)
def test_map_file_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_map_text(text)
    assert info.value.line == line


def test_map_file_error_column_points_into_body():
    with pytest.raises(ParseError) as info:
        parse_map_text("vars x1\nF1 = x1 + z\n")
    assert (info.value.line, info.value.col) == (2, 11)


def test_power_linear_file():
    A, d = parse_power_linear_text("2\n2 3\n0 0\n1 1/2\n")
    assert d == [2, 3]
    assert A == [[0, 0], [1, scalar("1/2")]]
    with pytest.raises(ParseError):
        parse_power_linear_text("2\n2\n0 0\n1 1\n")
    with pytest.raises(ParseError):
        parse_power_linear_text("2\n2 2\n0 0\n")


def test_matrix_file_round_trip():
    rows = [[scalar(1), scalar("-2/3"), scalar(0)]]
    assert parse_matrix_text(render_matrix_text(rows)) == rows
    with pytest.raises(ParseError):
        parse_matrix_text("2 2\n1 0\n")
    with pytest.raises(ParseError):
        parse_matrix_text("1 2\n1 1/0\n")
