import numpy as np
import pytest

from relcomp.algebra.errors import BadParameters, DivisionByZero, FieldMismatch, UnsupportedTransformSize
from relcomp.algebra.field import FieldSpec, get_field, ntt


def test_rejects_composite_and_even():
    with pytest.raises(BadParameters):
        FieldSpec(15)
    with pytest.raises(BadParameters):
        FieldSpec(2)
    with pytest.raises(ValueError):
        get_field(1000)


def test_two_adicity(F7, F998, GOLDILOCKS):
    assert F7.two_adicity == 1
    assert F998.two_adicity == 23
    assert GOLDILOCKS.two_adicity == 32
    assert F998.max_transform_size() == 1 << 23


def test_generator_has_full_order(F998):
    g = F998.generator
    for q in (2, 7, 17):
        assert pow(g, (F998.p - 1) // q, F998.p) != 1


def test_inverse_and_zero(F7):
    assert F7.mul(3, F7.inv(3)) == 1
    assert F7.pow(3, -1) == 5
    with pytest.raises(DivisionByZero):
        F7.inv(0)


def test_element_arithmetic(F7):
    x = F7.element(5)
    y = F7.element(4)
    assert int(x + y) == 2
    assert int(x - y) == 1
    assert int(3 - x) == 5
    assert int(x * y) == 6
    assert int(x / y) == 3
    assert int(-x) == 2
    assert int(x ** 6) == 1
    assert not F7.element(14)


def test_mixed_fields_rejected(F7):
    other = get_field(11)
    with pytest.raises(FieldMismatch):
        F7.element(1) + other.element(1)


def test_ntt_roundtrip_and_convolution(F998):
    a = [1, 2, 3, 0]
    b = [4, 5, 0, 0]
    fa, fb = F998.ntt(a), F998.ntt(b)
    prod = F998.ntt([x * y % F998.p for x, y in zip(fa, fb)], inverse=True)
    assert prod == [4, 13, 22, 15]
    assert F998.ntt(fa, inverse=True) == a


def _naive_dft(field, values, inverse=False):
    p, size = field.p, len(values)
    w = pow(field.generator, (p - 1) // size, p)
    if inverse:
        w = pow(w, p - 2, p)
    out = [sum(v * pow(w, j * k, p) for j, v in enumerate(values)) % p for k in range(size)]
    if inverse:
        scale = pow(size, p - 2, p)
        out = [c * scale % p for c in out]
    return out


@pytest.mark.parametrize("size", [1, 2, 8, 32])
def test_ntt_matches_naive_dft(F998, GOLDILOCKS, rng, size):
    for field in (F998, GOLDILOCKS):
        values = [rng.randrange(field.p) for _ in range(size)]
        assert field.ntt(values) == _naive_dft(field, values)
        assert field.ntt(values, inverse=True) == _naive_dft(field, values, inverse=True)


def test_vectorized_transform_only_for_small_primes(F998, GOLDILOCKS):
    assert F998.vectorized
    assert not GOLDILOCKS.vectorized
    with pytest.raises(UnsupportedTransformSize):
        GOLDILOCKS.ntt_array(np.array([1, 2], dtype=np.int64))


def test_ntt_size_limits(F7):
    assert F7.supports_transform(2)
    assert not F7.supports_transform(4)
    with pytest.raises(UnsupportedTransformSize):
        F7.ntt([1, 2, 3, 4])
    with pytest.raises(UnsupportedTransformSize):
        F7.ntt([1, 2, 3])


def test_element_ntt(F998):
    coeffs = [F998.element(v) for v in (1, 1)]
    assert [int(v) for v in ntt(coeffs, 2)] == [2, 0]
    with pytest.raises(UnsupportedTransformSize):
        ntt(coeffs, 4)


def test_get_field_is_cached():
    assert get_field(7) is get_field(7)
