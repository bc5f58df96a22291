import pytest

from relcomp.algebra.errors import DimMismatch, SingularBasis, ZeroColumn
from relcomp.algebra.polymat import (
    PolyMatrix,
    approximant_basis,
    const_det,
    const_inverse,
    const_kernel,
    const_mul,
    const_rank,
    form_predicates,
    mat_divrem,
    matrix_generator,
    pm_det,
    pm_mul,
    popov_form,
    weak_popov_columns,
)
from relcomp.algebra.upoly import Poly


def P(field, *coeffs):
    return Poly(field, coeffs)


def test_shape_checks(F7):
    A = PolyMatrix.identity(F7, 2)
    B = PolyMatrix.zeros(F7, 3, 1)
    with pytest.raises(DimMismatch):
        pm_mul(A, B)
    with pytest.raises(DimMismatch):
        PolyMatrix(F7, [[P(F7, 1)], [P(F7, 1), P(F7, 2)]])


def test_product_and_degrees(F7):
    A = PolyMatrix(F7, [[P(F7, 0, 1), P(F7, 1)], [P(F7), P(F7, 2)]])
    prod = A * A
    assert prod.entries[0][0] == P(F7, 0, 0, 1)
    assert prod.entries[0][1] == P(F7, 2, 1)
    assert A.column_degrees() == [1, 0]
    assert A.pivot_index(1) == 1
    assert A.leading_matrix() == [[1, 1], [0, 2]]


def test_form_predicates(F7):
    popov = PolyMatrix(F7, [[P(F7, 1, 0, 1), P(F7, 0, 1)], [P(F7, 1), P(F7, 3, 0, 1)]])
    report = form_predicates(popov)
    assert report.is_column_reduced and report.is_weak_popov and report.is_popov
    assert report.column_degrees == (2, 2)

    swapped = PolyMatrix.from_columns(F7, [popov.column(1), popov.column(0)])
    report = form_predicates(swapped)
    assert report.is_column_reduced
    assert not report.is_weak_popov

    with pytest.raises(ZeroColumn):
        form_predicates(PolyMatrix.zeros(F7, 2, 2))


def test_approximant_basis(F998):
    F = PolyMatrix(F998, [[P(F998, 1, 1)], [P(F998, 3, 0, 5, 7)]])
    order = 4
    basis = approximant_basis(F, order)
    for j in range(basis.cols):
        acc = sum((basis.entries[i][j] * F.entries[i][0] for i in range(2)), P(F998))
        assert acc.truncate(order).is_zero
    assert form_predicates(basis).is_popov
    det = pm_det(basis)
    assert det.degree == order
    assert det.valuation() == order


def test_matrix_generator_fibonacci(F7):
    seq = [0, 1]
    while len(seq) < 8:
        seq.append((seq[-1] + seq[-2]) % 7)
    gen = matrix_generator([[[v]] for v in seq], F7)
    assert not gen.degenerate
    assert gen.matrix.entries[0][0] == P(F7, 6, 1, 1)


def test_matrix_generator_zero_sequence(F7):
    gen = matrix_generator([[[0, 0], [0, 0]]] * 3, F7)
    assert gen.degenerate


def test_det_by_interpolation(F998):
    x1 = P(F998, 1, 1)
    entries = [[P(F998) for _ in range(4)] for _ in range(4)]
    for i in range(4):
        entries[i][i] = P(F998, i + 1, 0, 1)
        for j in range(i + 1, 4):
            entries[i][j] = x1
    A = PolyMatrix(F998, entries)
    expected = P(F998, 1)
    for i in range(4):
        expected = expected * entries[i][i]
    assert pm_det(A) == expected


def test_popov_normalization_and_division(F998):
    x = P(F998, 0, 1)
    R = PolyMatrix(F998, [[P(F998, 1, 0, 1), x], [P(F998, 1), P(F998, 3, 0, 1)]])
    swapped = PolyMatrix.from_columns(F998, [R.column(1), R.column(0)])
    popov, U = popov_form(swapped)
    assert popov == R
    assert pm_mul(swapped, U) == R

    v = [P(F998, 5, 4, 3, 2, 1), P(F998, 9, 0, 0, 8)]
    for basis in (R, swapped):
        q, r = mat_divrem(v, basis)
        recombined = pm_mul(basis, PolyMatrix(F998, [[c] for c in q]))
        assert [recombined.entries[i][0] + r[i] for i in range(2)] == v
        assert all(r[i].degree < 2 for i in range(2))


def test_weak_popov_columns_drops_dependent(F7):
    x = P(F7, 0, 1)
    cols = [[x, P(F7, 1)], [P(F7, 0, 0, 1), x]]
    reduced, trans = weak_popov_columns(cols, track=True)
    assert len(reduced) == 1
    U = PolyMatrix.from_columns(F7, trans)
    A = PolyMatrix.from_columns(F7, cols)
    assert pm_mul(A, U).column(0) == reduced[0]


def test_constant_helpers(F7):
    A = [[1, 2], [2, 4]]
    assert const_rank(A, F7) == 1
    (k,) = const_kernel(A, F7)
    assert const_mul(A, [[c] for c in k], F7) == [[0], [0]]
    B = [[2, 1], [1, 1]]
    assert const_det(B, F7) == 1
    assert const_mul(B, const_inverse(B, F7), F7) == [[1, 0], [0, 1]]
    with pytest.raises(SingularBasis):
        const_inverse(A, F7)


@pytest.mark.parametrize(
    "shift, expected",
    [
        ((0, 2), [[(0, 1), (4,)], [(), (1,)]]),
        ((2, 0), [[(1,), ()], [(2,), (0, 1)]]),
    ],
)
def test_approximant_basis_shifted_constants(F7, shift, expected):
    F = PolyMatrix(F7, [[P(F7, 1)], [P(F7, 3)]])
    basis = approximant_basis(F, 1, shift)
    assert basis == PolyMatrix(F7, [[P(F7, *e) for e in row] for row in expected])
    assert form_predicates(basis, shift).is_shifted_popov


def _coefficient_kernel(F, order, bound):
    """Approximants of degree <= bound as vectors, by linear algebra on coefficients."""
    field = F.field
    columns = []
    for i in range(F.rows):
        for t in range(bound + 1):
            columns.append(F.entries[i][0].shift(t).padded(order)[:order])
    A = [[col[k] for col in columns] for k in range(order)]
    vectors = []
    for vec in const_kernel(A, field, cols=len(columns)):
        vectors.append([P(field, *vec[i * (bound + 1) : (i + 1) * (bound + 1)]) for i in range(F.rows)])
    return vectors


def test_approximant_kernel_lies_in_span(F998, rng):
    order, shift = 5, (0, 1, 3)
    F = PolyMatrix(F998, [[P(F998, *[rng.randrange(F998.p) for _ in range(4)])] for _ in range(3)])
    basis = approximant_basis(F, order, shift)
    assert form_predicates(basis, shift).is_shifted_popov
    for j in range(basis.cols):
        acc = sum((basis.entries[i][j] * F.entries[i][0] for i in range(3)), P(F998))
        assert acc.truncate(order).is_zero
    kernel = _coefficient_kernel(F, order, int(basis.degree))
    assert kernel
    for vec in kernel:
        _, r = mat_divrem(vec, basis)
        assert all(c.is_zero for c in r)


def test_matrix_generator_recovers_known_basis(F998):
    p = F998.p
    y = P(F998, 0, 1)
    R = PolyMatrix(F998, [[P(F998, 1, 3, 1), P(F998, 2)], [y.scale(5), P(F998, 7, 0, 1)]], "y")
    coeff = [[[R.entries[i][j].coeff(k) for j in range(2)] for i in range(2)] for k in range(3)]
    R0_inv = const_inverse(coeff[0], F998)
    # H(y) = R(y)^-1 as a power series, so the right generators are exactly R K[y]^2
    H = [R0_inv]
    for k in range(1, 8):
        acc = [[0, 0], [0, 0]]
        for i in range(1, min(k, 2) + 1):
            term = const_mul(H[k - i], coeff[i], F998)
            acc = [[(acc[r][c] + term[r][c]) % p for c in range(2)] for r in range(2)]
        neg = [[-v % p for v in row] for row in acc]
        H.append(const_mul(neg, R0_inv, F998))

    gen = matrix_generator(H, F998)
    assert not gen.degenerate
    assert sorted(form_predicates(gen.matrix).column_degrees) == [2, 2]
    for j in range(2):
        _, r = mat_divrem(R.column(j), gen.matrix)
        assert all(c.is_zero for c in r)
        _, r = mat_divrem(gen.matrix.column(j), R)
        assert all(c.is_zero for c in r)


def test_mat_divrem_relation_example(F7):
    y = P(F7, 0, 1)
    R = PolyMatrix(F7, [[y, P(F7, 1)], [P(F7, 6), y]], "y")
    v = [P(F7, 0, 0, 1), P(F7)]
    q, r = mat_divrem(v, R)
    assert q == [y, P(F7, 1)]
    assert r == [P(F7, 6), P(F7)]

    q2, r2 = mat_divrem(r, R)
    assert all(c.is_zero for c in q2)
    assert r2 == r

    swapped = PolyMatrix.from_columns(F7, [R.column(1), R.column(0)], "y")
    _, r3 = mat_divrem(v, swapped)
    assert r3 == r
