import pytest

from druzkowski.casebook import furter_map, lifted_invertible_pairs, nilpotent_small_maps
from druzkowski.inversion import formal_inverse
from druzkowski.linalg import Matrix, kernel_basis, same_span
from druzkowski.parse import parse_polynomial
from druzkowski.poly import default_names, scalar, variables
from druzkowski.polymap import (
    PolyMap,
    PowerLinearData,
    compose_maps,
    constant_kernel,
    jacobian,
    jacobian_determinant,
    map_jacobian_of_H,
    map_nilpotency_index,
    matrix_power,
    nilpotency_index,
)
from druzkowski.power_linear import realize_map
from druzkowski.pairing import (
    INVALID,
    STRONG,
    WEAK,
    PairingError,
    extend_with_power,
    extension_tail_inverse,
    gz_lift,
    gz_reduce,
    kernel_translation_check,
    lift_line_collision,
    verify_pairing,
)


def pmap(*texts):
    names = default_names(len(texts))
    return PolyMap([parse_polynomial(t, names) for t in texts])


def M(rows):
    return Matrix([[scalar(v) for v in r] for r in rows])


@pytest.fixture(scope="module")
def quadratic_pair():
    return gz_lift(pmap("x1 + x1^2"))


def test_lift_of_x_plus_x_squared(quadratic_pair):
    p = quadratic_pair
    assert p.n == 3
    assert p.B == M([[1, 1, -1]])
    assert p.C == M([[1], [0], [0]])
    assert p.F.power_linear.A == M([[1, 1, -1]] * 3)
    assert p.F.power_linear.d == (2, 2, 2)
    l = parse_polynomial("x1 + x2 - x3", default_names(3))
    assert list(p.F) == [x + l ** 2 for x in variables(3)]
    assert p.status == STRONG
    assert verify_pairing(p.f, p.F, p.B, p.C).status == STRONG
    assert len(kernel_basis(p.B)) == 2


def test_verify_pairing_failures(quadratic_pair):
    p = quadratic_pair
    bad_C = M([[2], [0], [0]])
    check = verify_pairing(p.f, p.F, p.B, bad_C)
    assert check.status == INVALID
    # scaling C breaks condition 1 first; keep f consistent to isolate condition 2
    f2 = PolyMap([parse_polynomial("2*x1 + 4*x1^2", ["x1"])])
    check = verify_pairing(f2, p.F, p.B, bad_C)
    assert check.status == INVALID and check.failed.startswith("condition 2")
    # naive lift: F = (x1 + x1^2, x2, x3) with B = [1,1,-1]: ker B not inside ker JH
    F = pmap("x1 + x1^2", "x2", "x3")
    check = verify_pairing(p.f, F, p.B, p.C)
    assert check.status == INVALID and check.failed.startswith("condition 3")
    with pytest.raises(PairingError):
        verify_pairing(p.f, p.F, M([[1, 1]]), p.C)


def test_weak_pair():
    F = pmap("x1", "x2", "x3 + x1^2")
    B = M([[1, 0, 0], [0, 0, 1]])
    C = M([[1, 0], [0, 0], [0, 1]])
    f = pmap("x1", "x2 + x1^2")
    check = verify_pairing(f, F, B, C)
    assert check.status == WEAK


def test_lift_rejections():
    with pytest.raises(PairingError, match="nothing to lift"):
        gz_lift(PolyMap.identity(2))
    with pytest.raises(PairingError):
        gz_lift(pmap("x1 + x2", "x2"))
    with pytest.raises(PairingError):
        gz_lift(pmap("x1 + 1 + x2^2", "x2"))


def test_furter_lift():
    pair = gz_lift(furter_map())
    assert pair.status == STRONG
    assert pair.n <= 20
    assert kernel_translation_check(pair.F, pair.B, pair.C)


def test_reduce_examples():
    F = pmap(*(f"x{i} + (x1 + x2 - x3)^2" for i in (1, 2, 3)))
    pair = gz_reduce(F, 1)
    assert pair.status == STRONG
    h = pair.f.H()[0]
    assert h.is_homogeneous() and h.degree() == 2 and len(list(h.terms())) == 1
    assert h.coefficient([2]) != 0

    pair = gz_reduce(pmap("x1", "x2 + x1^3"), 1)
    assert pair.f.is_identity()
    assert same_span(kernel_basis(pair.B), [(0, 1)], 2)
    with pytest.raises(PairingError):
        gz_reduce(F, 3)
    with pytest.raises(PairingError):
        gz_reduce(pmap("x1 + x2^2", "x2 + x1^2"), 1)


def test_reduce_lift_round_trip():
    for pair, finv in lifted_invertible_pairs(8, 4):
        back = gz_reduce(pair.F, pair.r)
        assert back.status == STRONG
        assert jacobian_determinant(back.f) == jacobian_determinant(pair.f) == 1
        inv = formal_inverse(back.f)
        assert inv.certified
        assert inv.degree == finv.degree()


def test_kernel_translation():
    for f in nilpotent_small_maps(12, 2):
        pair = gz_lift(f)
        assert kernel_translation_check(pair.F, pair.B, pair.C)
    assert kernel_translation_check(PolyMap.identity(3), M([[1, 1, -1]]), M([[1], [0], [0]]))
    F = pmap("x1 + x1^2", "x2", "x3")
    assert not kernel_translation_check(F, M([[1, 1, -1]]), M([[1], [0], [0]]))


def test_extension_of_quadratic_pair(quadratic_pair):
    ext = extend_with_power(quadratic_pair, 1, 2)
    assert ext.n == 4
    assert ext.status == STRONG
    assert ext.B == M([[1, 1, -1, 0]])
    assert ext.C == M([[1], [0], [0], [0]])
    names = default_names(4)
    assert ext.F[3] == parse_polynomial("x4 + (x1 + x2 - x3)^2", names)
    # f^{-1} is only a power series here; compare through degree 6
    assert formal_inverse(quadratic_pair.f, bound=6).inverse is None
    tail = extension_tail_inverse(quadratic_pair, truncated_series_inverse(quadratic_pair.f, 6), 1, 2)
    assert tail.truncate(6) == truncated_series_inverse(ext.F, 6)[3]
    with pytest.raises(PairingError):
        extend_with_power(quadratic_pair, 2, 2)
    with pytest.raises(PairingError):
        extend_with_power(quadratic_pair, 1, 1)


def truncated_series_inverse(F, bound):
    """Degree <= bound part of the formal inverse, by fixed-point iteration."""
    X = variables(F.n)
    G = list(X)
    for _ in range(bound):
        HG = compose_maps(PolyMap(F.components), PolyMap(G))
        G = [(x - (hg - g)).truncate(bound) for x, hg, g in zip(X, HG, G)]
    return PolyMap(G)


def test_extension_of_furter_pair():
    f = furter_map()
    pair = gz_lift(f)
    finv = formal_inverse(f).inverse
    tail = extension_tail_inverse(pair, finv, 1, 2)
    assert tail.degree() == 2 * finv[0].degree() == 12


def test_line_collision_lift(quadratic_pair):
    lam, mu = scalar(1), scalar(3)
    # f(lam y) = f(mu y) at y = -1/(lam + mu)
    a = [-1 / (lam + mu), 0, 0]
    b = lift_line_collision(quadratic_pair, a, lam, mu)
    assert b is not None
    assert not any(quadratic_pair.B @ b)
    ab = [x + y for x, y in zip(a, b)]
    F = quadratic_pair.F
    assert F.evaluate([lam * v for v in ab]) == F.evaluate([mu * v for v in ab])
    assert lift_line_collision(quadratic_pair, [1, 0, 0], lam, mu) is None
    with pytest.raises(ValueError):
        lift_line_collision(quadratic_pair, a, 2, 2)


def test_index_transfer_on_lifts():
    for f in nilpotent_small_maps(20, 13):
        pair = gz_lift(f)
        kh = nilpotency_index(jacobian(f.H()))
        kH = map_nilpotency_index(pair.F)
        if kh is None:
            assert kH is None
        else:
            assert kH is not None and kH <= kh + 1
            JH = map_jacobian_of_H(pair.F)
            assert matrix_power(JH, kh + 1).is_zero()


def test_lifted_data_has_kernel_of_B():
    pair = gz_lift(pmap("x1 + x2^2 + x2^3", "x2"))
    data = pair.F.power_linear
    assert isinstance(data, PowerLinearData)
    assert same_span(kernel_basis(data.A), kernel_basis(pair.B), pair.n)
    assert sorted(set(data.d)) == [2, 3]
    assert same_span(constant_kernel(jacobian(realize_map(data).H())), kernel_basis(pair.B), pair.n)
