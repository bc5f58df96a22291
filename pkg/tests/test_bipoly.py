import pytest

from relcomp.algebra.bipoly import (
    BiPoly,
    bi_mul,
    bi_rem,
    eval_y,
    inverse_kronecker,
    kronecker_pack,
    kronecker_unpack,
    x_slice,
    y_reverse,
)
from relcomp.algebra.errors import BlockTooSmall, DegreeOverflow
from relcomp.algebra.upoly import Poly, powmod


def random_bipoly(field, rng, xb, yb):
    return BiPoly(field, [[rng.randrange(field.p) for _ in range(yb)] for _ in range(xb)], xb, yb)


def test_bounds_enforced(F7):
    with pytest.raises(DegreeOverflow):
        BiPoly(F7, [[1, 2, 3]], 1, 2)
    G = BiPoly(F7, [[1, 0], [0, 2]])
    assert (G.xbound, G.ybound) == (2, 2)
    assert G.x_degree() == 1 and G.y_degree() == 1
    assert BiPoly.zero(F7, 3, 3).x_degree() == -1


def test_views(F7):
    # 1 + 2y + 3x + 4xy
    G = BiPoly(F7, [[1, 2], [3, 4]])
    assert G.x_coeff(1).coeffs == (3, 4)
    assert G.y_coeff(1).coeffs == (2, 4)
    assert G(1, 1) == 10 % 7
    assert G.coeff(5, 5) == 0


def test_mul_matches_pointwise(F998, rng):
    A = random_bipoly(F998, rng, 4, 5)
    B = random_bipoly(F998, rng, 3, 6)
    C = A * B
    assert (C.xbound, C.ybound) == (6, 10)
    for x, y in [(2, 3), (5, 7), (11, 13)]:
        assert C(x, y) == A(x, y) * B(x, y) % F998.p


def test_truncated_mul(F998, rng):
    A = random_bipoly(F998, rng, 4, 4)
    B = random_bipoly(F998, rng, 4, 4)
    full = A * B
    assert bi_mul(A, B, xtrunc=3, ytrunc=2) == full.truncate_x(3).truncate_y(2)


def test_kronecker_pack_unpack(F7):
    G = BiPoly(F7, [[1, 2], [3, 4]])
    packed = kronecker_pack(G, 3)
    assert packed.coeffs == (1, 2, 0, 3, 4)
    assert kronecker_unpack(packed, 3, 2) == G
    with pytest.raises(DegreeOverflow):
        kronecker_pack(G, 1)


def test_rem_and_eval(F7):
    f = Poly(F7, [1, 0, 1])
    # x^2 + y
    G = BiPoly(F7, [[0, 1], [0, 0], [1, 0]])
    R = bi_rem(G, f)
    assert R.xbound == 2
    assert R == BiPoly(F7, [[6, 1]])
    a = Poly(F7, [0, 1])
    assert eval_y(G, a, f) == Poly(F7, [6, 1])


def test_eval_y_is_horner(F998, rng, make_modulus, make_poly):
    f = make_modulus(F998, 6)
    a = make_poly(F998, 6)
    G = random_bipoly(F998, rng, 6, 5)
    expected = Poly.zero(F998)
    for j in range(5):
        expected = expected + G.y_coeff(j) * powmod(a, j, f)
    assert eval_y(G, a, f) == expected % f


def test_slice_and_y_reverse(F7):
    G = BiPoly(F7, [[1, 2], [3, 4], [5, 6]])
    assert x_slice(G, 1, 1) == BiPoly(F7, [[3, 4], [5, 6]])
    assert y_reverse(G, 2) == BiPoly(F7, [[0, 2, 1], [0, 4, 3], [0, 6, 5]])
    with pytest.raises(DegreeOverflow):
        y_reverse(G, 0)


def test_inverse_kronecker_substitution(F998, rng):
    G = random_bipoly(F998, rng, 3, 27)
    view = inverse_kronecker(G, 3)
    assert view.coeff(1, 2, 1, 2) == G.coeff(1, 2 + 3 + 18)
    assert view.substitute_powers() == G
    with pytest.raises(BlockTooSmall):
        inverse_kronecker(G, 2)
