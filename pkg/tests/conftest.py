import itertools

import pytest
from hypothesis import settings, strategies as st

from druzkowski.poly import Polynomial, scalar
from druzkowski.linalg import Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.builds(lambda p, q: scalar(p) / q, st.integers(-20, 20), st.integers(1, 6))
nonzero_rationals = rationals.filter(lambda c: c != 0)


@st.composite
def polynomials(draw, nvars=3, max_degree=3, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars)))
        if sum(exps) > max_degree:
            continue
        terms[exps] = terms.get(exps, 0) + draw(nonzero_rationals)
    return Polynomial.from_terms(nvars, terms)


@st.composite
def points(draw, nvars=3):
    return [draw(rationals) for _ in range(nvars)]


@st.composite
def matrices(draw, rows, cols, lo=-4, hi=4):
    return Matrix([[scalar(draw(st.integers(lo, hi))) for _ in range(cols)] for _ in range(rows)], cols)


def cofactor_det(rows):
    """Laplace expansion along the first row; an oracle for small matrices."""
    n = len(rows)
    if n == 0:
        return scalar(1)
    if n == 1:
        return scalar(rows[0][0])
    total = scalar(0)
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def minor_rank(rows):
    """Largest size of a nonvanishing minor, by enumeration."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    for k in range(min(m, n), 0, -1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                if cofactor_det([[rows[i][j] for j in ci] for i in ri]):
                    return k
    return 0


@pytest.fixture
def rng():
    from druzkowski.rng import SplitMix64

    return SplitMix64(20261016)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[k])
