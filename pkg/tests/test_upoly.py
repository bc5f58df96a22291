import pytest

from relcomp.algebra import upoly
from relcomp.algebra.errors import (
    DegreeOverflow,
    DivisionByZero,
    DuplicateAbscissa,
    NotAUnit,
    NotInvertibleModF,
)
from relcomp.algebra.upoly import (
    DEG_ZERO,
    Poly,
    interpolate,
    mul_trunc,
    multipoint_eval,
    poly_gcd,
    poly_inv_mod,
    poly_reverse,
    poly_slice,
    powmod,
    series_inv,
    subproduct_tree,
)


def test_zero_degree_and_trimming(F7):
    assert Poly(F7, [0, 0]).degree == DEG_ZERO
    assert Poly(F7, [3, 7, 0]).coeffs == (3,)
    assert Poly(F7, [-1]).coeffs == (6,)
    assert Poly.monomial(F7, 3, 2).degree == 3


def test_mul_small(F7):
    u = Poly(F7, [1, 1])
    assert (u * u).coeffs == (1, 2, 1)
    assert (u * 3).coeffs == (3, 3)
    assert (2 * u).coeffs == (2, 2)


def test_ntt_product_matches_schoolbook(F998, make_poly, monkeypatch):
    u = make_poly(F998, 90)
    v = make_poly(F998, 70)
    fast = u * v
    monkeypatch.setattr(upoly, "MUL_THRESHOLD", 10**9)
    assert fast == u * v
    monkeypatch.setattr(upoly, "SMALL_PRODUCT", 10**9)
    assert fast == u * v


def test_limb_convolution_matches_schoolbook(F998, GOLDILOCKS, make_poly, monkeypatch):
    u, v = make_poly(F998, 40), make_poly(F998, 30)
    w = Poly(F998, [F998.p - 1] * 31)
    fast, edge = u * v, w * w
    monkeypatch.setattr(upoly, "SMALL_PRODUCT", 10**9)
    assert fast == u * v
    assert edge == w * w
    g1, g2 = make_poly(GOLDILOCKS, 80), make_poly(GOLDILOCKS, 70)
    for x in (0, 1, 12345, GOLDILOCKS.p - 1):
        assert (g1 * g2)(x) == g1(x) * g2(x) % GOLDILOCKS.p


def test_divrem_short_modulus_paths_agree(F998, make_poly, monkeypatch):
    u = make_poly(F998, 150)
    f = make_poly(F998, 20)
    q, r = divmod(u, f)
    assert q * f + r == u
    monkeypatch.setattr(upoly, "SMALL_PRODUCT", 10**9)
    assert divmod(u, f) == (q, r)


def test_divrem_identity(F998, make_poly):
    u = make_poly(F998, 150)
    f = make_poly(F998, 60)
    q, r = divmod(u, f)
    assert r.degree < f.degree
    assert q * f + r == u


def test_divrem_by_zero(F7):
    with pytest.raises(DivisionByZero):
        Poly(F7, [1]) % Poly.zero(F7)


def test_series_inverse(F998, make_poly):
    u = make_poly(F998, 40)
    u = u + Poly.constant(F998, 1 - u.coeff(0))
    inv = series_inv(u, 64)
    assert mul_trunc(u, inv, 64) == Poly.constant(F998, 1)
    with pytest.raises(NotAUnit):
        series_inv(Poly(F998, [0, 1]), 4)


def test_slice_and_reverse(F7):
    u = Poly(F7, [1, 2, 3, 4])
    assert poly_slice(u, 1, 1).coeffs == (2, 3)
    assert poly_slice(u, 2, -1).is_zero
    assert poly_reverse(u, 4).coeffs == (0, 4, 3, 2, 1)
    with pytest.raises(DegreeOverflow):
        poly_reverse(u, 2)


def test_powmod(F7):
    f = Poly(F7, [1, 0, 1])
    x = Poly.monomial(F7, 1)
    assert powmod(x, 2, f).coeffs == (6,)
    assert powmod(x, 4, f).coeffs == (1,)
    assert powmod(x, 0, f).coeffs == (1,)


def test_inverse_mod(F7):
    f = Poly(F7, [1, 0, 1])
    x = Poly.monomial(F7, 1)
    inv = poly_inv_mod(x, f)
    assert (inv * x) % f == Poly.constant(F7, 1)
    with pytest.raises(NotInvertibleModF):
        poly_inv_mod(Poly(F7, [1, 1]), Poly(F7, [1, 2, 1]))


def test_gcd_is_monic(F7):
    a = Poly(F7, [2, 2])
    b = Poly(F7, [1, 2, 1])
    assert poly_gcd(a, b).coeffs == (1, 1)


def test_subproduct_root(F7):
    tree = subproduct_tree([1, 2, 3], F7)
    assert tree[-1][0] == Poly(F7, [6, 1]) * Poly(F7, [5, 1]) * Poly(F7, [4, 1])


@pytest.mark.parametrize("count", [5, 40])
def test_eval_and_interpolate(F998, make_poly, count):
    u = make_poly(F998, count)
    xs = list(range(1, count + 1))
    values = multipoint_eval(u, xs)
    assert values == [u(x) for x in xs]
    assert interpolate(F998, xs, values) == u


def test_interpolate_rejects_duplicates(F7):
    with pytest.raises(DuplicateAbscissa):
        interpolate(F7, [1, 8], [0, 0])


def test_derivative_and_monic(F7):
    u = Poly(F7, [1, 2, 3])
    assert u.derivative().coeffs == (2, 6)
    assert u.monic().lc == 1
    assert u.valuation() == 0
    assert Poly(F7, [0, 0, 5]).valuation() == 2
