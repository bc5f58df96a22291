import math

import pytest

from relcomp.algebra.bipoly import BiPoly, eval_y
from relcomp.algebra.errors import (
    BadParameters,
    BoundTooSmall,
    NeedsUnitConstantTerm,
    NonGeneric,
    NotCoprime,
    StaleTables,
)
from relcomp.algebra.polymat import form_predicates, mat_divrem, pm_det
from relcomp.algebra.relations import (
    check_power_tables,
    direct_truncated_table,
    joint_reduce,
    mm_basis,
    mm_basis_oracle,
    mm_degree_by_rank,
    nmu_basis,
    nmu_degree_by_rank,
    powers_AB,
    reduce_by_mm,
    x_power_witness,
)
from relcomp.algebra.upoly import Poly, poly_inv_mod, powmod


def test_nmu_basis_small_example(F7):
    f = Poly(F7, [1, 0, 1])
    a = Poly(F7, [0, 1])
    basis = nmu_basis(f, a, 2)
    assert basis.module_kind == "N"
    assert basis.delta == 1
    assert basis.generic
    assert pm_det(basis.matrix).degree == 2
    assert form_predicates(basis.matrix).is_popov


def test_nmu_basis_columns_are_relations(F998, make_modulus, make_poly):
    f = make_modulus(F998, 12)
    a = make_poly(F998, 12)
    basis = nmu_basis(f, a, 3)
    assert basis.delta == 4 and basis.generic
    for j in range(3):
        column = basis.matrix.column(j)
        acc = sum((column[i] * powmod(a, i, f) for i in range(3)), Poly.zero(F998))
        assert (acc % f).is_zero
    assert nmu_degree_by_rank(f, a, 3) == basis.delta


def test_nmu_basis_rejects_bad_mu(F7):
    f = Poly(F7, [1, 0, 1])
    with pytest.raises(BadParameters):
        nmu_basis(f, Poly(F7, [0, 1]), 3)


def test_joint_reduce_representatives(F998, make_modulus, make_poly):
    f = make_modulus(F998, 10)
    a = make_poly(F998, 10)
    targets = [make_poly(F998, 10) for _ in range(5)]
    basis, reps = joint_reduce(f, a, 3, targets)
    assert len(reps) == 5
    for u, U in zip(targets, reps):
        assert U.x_degree() < basis.delta and U.y_degree() < 3
        assert eval_y(U, a, f) == u % f


def test_powers_ab(F998, make_modulus, make_poly):
    f = make_modulus(F998, 16)
    a = make_poly(F998, 16)
    mu = 3
    A, B, basis = powers_AB(f, a, mu)
    for j in range(mu):
        assert eval_y(A[j], a, f) == powmod(a, j * mu, f)
        assert eval_y(B[j], a, f) == powmod(a, j * mu * mu, f)
    assert check_power_tables(f, a, mu, A, B) == basis.delta == 6


def test_stale_power_tables(F998, make_modulus, make_poly):
    f = make_modulus(F998, 9)
    a, other = make_poly(F998, 9), make_poly(F998, 9)
    A, B, _ = powers_AB(f, other, 3)
    with pytest.raises(StaleTables):
        check_power_tables(f, a, 3, A, B)
    with pytest.raises(StaleTables):
        check_power_tables(f, other, 3, A[:2], B)


def test_mm_basis_certified(F998, make_modulus, make_poly):
    f = make_modulus(F998, 12)
    a = make_poly(F998, 12)
    m = 3
    delta = math.ceil(12 / m)
    table = direct_truncated_table(f, poly_inv_mod(a, f), m, 2 * delta)
    basis = mm_basis(f, a, m, table)
    assert basis.module_kind == "M"
    assert basis.delta == delta
    assert sum(basis.column_degrees) == 12
    assert pm_det(basis.matrix).degree == 12
    for j in range(m):
        column = BiPoly.from_x_coeffs(F998, basis.matrix.column(j), delta + 1)
        assert eval_y(column, a, f).is_zero
    assert mm_degree_by_rank(f, a, m) == delta


def test_mm_basis_oracle_agrees_on_degree(F998, make_modulus, make_poly):
    f = make_modulus(F998, 8)
    a = make_poly(F998, 8)
    oracle = mm_basis_oracle(f, a, 2, 4)
    assert pm_det(oracle).degree == 8
    with pytest.raises(BoundTooSmall):
        mm_basis_oracle(f, a, 2, 2)


def test_mm_basis_preconditions(F7):
    f = Poly(F7, [0, 1, 0, 1])
    a = Poly(F7, [1, 1])
    table = direct_truncated_table(Poly(F7, [1, 0, 1]), Poly(F7, [0, 1]), 1, 4)
    with pytest.raises(NeedsUnitConstantTerm):
        mm_basis(f, a, 1, table)
    g = Poly(F7, [1, 2, 1])
    with pytest.raises(NotCoprime):
        mm_basis(g, Poly(F7, [1, 1]), 1, table)


def test_reduce_by_mm(F998, make_modulus, make_poly, rng):
    f = make_modulus(F998, 9)
    a = make_poly(F998, 9)
    m = 3
    table = direct_truncated_table(f, poly_inv_mod(a, f), m, 6)
    basis = mm_basis(f, a, m, table)
    g = BiPoly(F998, [[rng.randrange(F998.p) for _ in range(20)] for _ in range(m)])
    reduced = reduce_by_mm(g, basis)
    assert reduced.y_degree() < basis.delta
    assert eval_y(reduced, a, f) == eval_y(g, a, f)
    with pytest.raises(BadParameters):
        reduce_by_mm(g, nmu_basis(f, a, 3))


def test_x_power_witness_is_generic(F998, make_modulus):
    f = make_modulus(F998, 10)
    a = x_power_witness(f, 3)
    assert a == Poly.monomial(F998, 4) % f
    assert nmu_basis(f, a, 3).generic


def test_mm_basis_refuses_constant_argument(F998, make_modulus):
    f = make_modulus(F998, 9)
    a = Poly.constant(F998, 5)
    m = 3
    table = direct_truncated_table(f, poly_inv_mod(a, f), m, 6)
    with pytest.raises(NonGeneric):
        mm_basis(f, a, m, table)


def test_mm_basis_spans_the_oracle_module(F998, make_modulus, make_poly):
    f = make_modulus(F998, 8)
    a = make_poly(F998, 8)
    m = 2
    table = direct_truncated_table(f, poly_inv_mod(a, f), m, 8)
    fast = mm_basis(f, a, m, table).matrix
    oracle = mm_basis_oracle(f, a, m, 4)
    for left, right in ((fast, oracle), (oracle, fast)):
        for j in range(m):
            _, r = mat_divrem(left.column(j), right)
            assert all(c.is_zero for c in r)
