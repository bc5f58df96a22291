import random

import pytest

from relcomp.algebra.field import GOLDILOCKS as GOLDILOCKS_P, get_field
from relcomp.algebra.upoly import Poly


@pytest.fixture
def F7():
    return get_field(7)


@pytest.fixture
def F998():
    return get_field(998244353)


@pytest.fixture
def GOLDILOCKS():
    return get_field(GOLDILOCKS_P)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_poly(field, rng, length):
    return Poly(field, [rng.randrange(field.p) for _ in range(length)])


def random_monic(field, rng, n, unit_constant=True):
    coeffs = [rng.randrange(field.p) for _ in range(n)] + [1]
    if unit_constant and coeffs[0] == 0:
        coeffs[0] = 1
    return Poly(field, coeffs)


@pytest.fixture
def make_poly(rng):
    return lambda field, length: random_poly(field, rng, length)


@pytest.fixture
def make_modulus(rng):
    return lambda field, n, unit_constant=True: random_monic(field, rng, n, unit_constant)
