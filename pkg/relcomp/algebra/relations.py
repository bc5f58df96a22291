"""Relation modules of (x, a) modulo f and reductions by their minimal bases.

N_mu: vectors (p_0, ..., p_{mu-1}) over K[x] with sum p_i a^i = 0 mod f.
M_m:  vectors (p_0, ..., p_{m-1}) over K[y] with sum x^i p_i(a) = 0 mod f.

A vector read as a bivariate polynomial is p(x, y) = sum_i p_i(x) y^i for N_mu
and p(x, y) = sum_i x^i p_i(y) for M_m.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from relcomp.algebra.bipoly import BiPoly, eval_y
from relcomp.algebra.errors import (
    BadParameters,
    BoundTooSmall,
    NeedsUnitConstantTerm,
    NonGeneric,
    NotCoprime,
    SingularBasis,
    StaleTables,
    ZeroColumn,
)
from relcomp.algebra.polymat import (
    PolyMatrix,
    approximant_basis,
    const_kernel,
    const_rank,
    form_predicates,
    mat_divrem,
    matrix_generator,
    pm_det,
    weak_popov_columns,
)
from relcomp.algebra.upoly import Poly, poly_gcd, powmod

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelationBasis:
    matrix: PolyMatrix
    module_kind: str
    mu: int
    delta: int
    shift: tuple[int, ...]
    generic: bool
    column_degrees: tuple[int, ...] = dc_field(default=())


@dataclass(frozen=True)
class TruncatedPowerTable:
    """entries[i][k] = [x^i a_inv^(k+1) rem f]_0^(m-1)."""

    m: int
    count: int
    entries: tuple[tuple[Poly, ...], ...]

    def entry(self, i: int, k: int) -> Poly:
        return self.entries[i][k]


def _degree_of(f: Poly) -> int:
    if f.degree < 1:
        raise BadParameters("modulus must have positive degree")
    return int(f.degree)


def _check_mu(n: int, mu: int):
    if mu < 1 or mu > n:
        raise BadParameters(f"block size {mu} outside [1, {n}]")


def _powers(a: Poly, f: Poly, count: int, step: int = 1) -> list[Poly]:
    """[a^(j*step) rem f for j < count]."""
    base = powmod(a, step, f)
    out = [Poly.constant(f.field, 1) % f]
    for _ in range(1, count):
        out.append((out[-1] * base) % f)
    return out[:count]


# === N_mu ===


def _vanishes_n(matrix: PolyMatrix, abar: Sequence[Poly], f: Poly) -> bool:
    for j in range(matrix.cols):
        acc = Poly.zero(f.field)
        for i, ai in enumerate(abar):
            acc = acc + matrix.entries[i][j] * ai
        if not (acc % f).is_zero:
            return False
    return True


def nmu_basis(f: Poly, a: Poly, mu: int) -> RelationBasis:
    """Popov basis of N_mu, certified by det degree and column membership."""
    n = _degree_of(f)
    _check_mu(n, mu)
    field = f.field
    abar = _powers(a % f, f, mu)

    F = PolyMatrix(field, [[ai] for ai in abar] + [[f]], "x", 1)
    approx = approximant_basis(F, 2 * n + 1, [0] * (mu + 1))
    R = approx.submatrix(range(mu), range(mu))

    det = pm_det(R)
    if det.degree != n or not _vanishes_n(R, abar, f):
        raise SingularBasis("relation basis failed certification")
    cdeg = tuple(int(d) for d in R.column_degrees())
    delta = max(cdeg)
    generic = delta == math.ceil(n / mu)
    logger.debug(f"N basis: n={n} mu={mu} delta={delta} generic={generic}")
    return RelationBasis(R, "N", mu, delta, (0,) * mu, generic, cdeg)


def joint_reduce(
    f: Poly, a: Poly, mu: int, u: Sequence[Poly]
) -> tuple[RelationBasis, list[BiPoly]]:
    """Representatives U_j in K[x,y]_{<(delta, mu)} with U_j(x, a) = u_j mod f."""
    n = _degree_of(f)
    _check_mu(n, mu)
    field = f.field
    p = field.p
    abar = _powers(a % f, f, mu)
    basis = None
    reps: list[BiPoly] = []

    for start in range(0, len(u), mu):
        chunk = [uj % f for uj in u[start : start + mu]]
        ell = len(chunk)
        rows = [[ai] for ai in abar] + [[uj.scale(p - 1)] for uj in chunk] + [[f]]
        F = PolyMatrix(field, rows, "x", 1)
        shift = [0] * mu + [n] * ell + [0]
        P = approximant_basis(F, 2 * n + 1, shift)

        for i in range(mu, mu + ell):
            for j in range(mu + ell):
                expected = 1 if i == j else 0
                e = P.entries[i][j]
                if (j < mu and not e.is_zero) or (j >= mu and e.coeffs != ((expected,) if expected else ())):
                    raise SingularBasis("joint reduction basis lost its block structure")

        if basis is None:
            R = P.submatrix(range(mu), range(mu))
            cdeg = tuple(int(d) for d in R.column_degrees())
            delta = max(cdeg)
            basis = RelationBasis(R, "N", mu, delta, (0,) * mu, delta == math.ceil(n / mu), cdeg)

        for j in range(ell):
            coeffs = [P.entries[i][mu + j] for i in range(mu)]
            reps.append(BiPoly.from_y_coeffs(field, coeffs, basis.delta))

    if basis is None:
        basis = nmu_basis(f, a, mu)
    return basis, reps


def powers_AB(f: Poly, a: Poly, mu: int) -> tuple[list[BiPoly], list[BiPoly], RelationBasis]:
    """A_j, B_j in K[x,y]_{<(delta, mu)} with A_j(x,a) = a^(j mu), B_j(x,a) = a^(j mu^2) mod f."""
    n = _degree_of(f)
    _check_mu(n, mu)
    a = a % f
    targets = _powers(a, f, mu, mu) + _powers(a, f, mu, mu * mu)
    basis, reps = joint_reduce(f, a, mu, targets)
    return reps[:mu], reps[mu:], basis


def check_power_tables(
    f: Poly, a: Poly, mu: int, A: Sequence[BiPoly], B: Sequence[BiPoly], spot_check: bool = True
) -> int:
    """Spot-checks A/B against (f, a, mu); returns their common x-bound.

    With ``spot_check=False`` only the shapes are checked.
    """
    if len(A) != mu or len(B) != mu:
        raise StaleTables(f"expected {mu} entries in each power table")
    if any(t.y_degree() >= mu for t in (*A, *B)):
        raise StaleTables("power table entry exceeds the y-bound")
    if not spot_check:
        return max(t.xbound for t in (*A, *B))
    one = Poly.constant(f.field, 1) % f
    if eval_y(A[0], a, f) != one or eval_y(B[0], a, f) != one:
        raise StaleTables("A_0 and B_0 must represent 1")
    if mu > 1:
        if eval_y(A[1], a, f) != powmod(a, mu, f) or eval_y(B[1], a, f) != powmod(a, mu * mu, f):
            raise StaleTables("power tables were built for another (f, a, mu)")
    return max(t.xbound for t in (*A, *B))


# === M_m ===


def direct_truncated_table(f: Poly, a_inv: Poly, m: int, count: int) -> TruncatedPowerTable:
    """Builds [x^i a_inv^(k+1) rem f]_0^(m-1) directly, for i < m and k < count."""
    a_inv = a_inv % f
    rows = []
    xi = Poly.constant(f.field, 1)
    for _ in range(m):
        cur = (xi * a_inv) % f
        row = []
        for _ in range(count):
            row.append(cur.truncate(m))
            cur = (cur * a_inv) % f
        rows.append(tuple(row))
        xi = (xi.shift(1)) % f
    return TruncatedPowerTable(m, count, tuple(rows))


def _as_bivariate_column(matrix: PolyMatrix, j: int) -> BiPoly:
    """Column j of an M-basis read as sum_i x^i p_ij(y)."""
    column = matrix.column(j)
    ybound = max((len(e.coeffs) for e in column), default=0)
    return BiPoly.from_x_coeffs(matrix.field, column, max(ybound, 1))


def mm_basis(f: Poly, a: Poly, m: int, T: TruncatedPowerTable) -> RelationBasis:
    """Certified weak Popov basis of M_m of degree ceil(n/m), or NonGeneric."""
    n = _degree_of(f)
    _check_mu(n, m)
    field = f.field
    if f.coeff(0) == 0:
        raise NeedsUnitConstantTerm("M basis needs f(0) != 0")
    a = a % f
    if poly_gcd(a, f).degree != 0:
        raise NotCoprime("a and f share a factor")
    delta = math.ceil(n / m)
    if T.m != m or T.count < 2 * delta:
        raise BadParameters(f"table of shape ({T.m}, {T.count}) for m={m}, 2*delta={2 * delta}")

    H = [[[T.entry(col, k).coeff(i) for col in range(m)] for i in range(m)] for k in range(2 * delta)]
    generator = matrix_generator(H, field)
    if generator.degenerate:
        raise NonGeneric("truncated power sequence is zero")
    R = generator.matrix

    try:
        report = form_predicates(R)
    except ZeroColumn as e:
        raise NonGeneric(f"generator has a zero column: {e}") from e
    if not report.is_column_reduced:
        raise NonGeneric("generator is not column reduced")
    if R.degree > delta:
        raise NonGeneric(f"generator degree {R.degree} exceeds {delta}")
    if sum(report.column_degrees) != n:
        raise NonGeneric(f"column degrees sum to {sum(report.column_degrees)}, not {n}")
    for j in range(m):
        if not eval_y(_as_bivariate_column(R, j), a, f).is_zero:
            raise NonGeneric(f"column {j} is not a relation")

    logger.debug(f"M basis: n={n} m={m} delta={delta} certified")
    return RelationBasis(R, "M", m, int(R.degree), (0,) * m, True, report.column_degrees)


def mm_basis_oracle(f: Poly, a: Poly, m: int, bound: int) -> PolyMatrix:
    """Column reduced basis of the relations of y-degree <= bound, by dense linear algebra."""
    n = _degree_of(f)
    field = f.field
    if m * (bound + 1) <= n:
        raise BoundTooSmall(f"m(D+1) = {m * (bound + 1)} does not exceed n = {n}")
    a = a % f
    apow = _powers(a, f, bound + 1)
    images = []
    xi = Poly.constant(field, 1)
    for _ in range(m):
        for j in range(bound + 1):
            images.append((xi * apow[j]) % f)
        xi = xi.shift(1) % f
    A = [[img.coeff(r) for img in images] for r in range(n)]
    kernel = const_kernel(A, field, cols=len(images))

    columns = []
    for vec in kernel:
        columns.append(
            [Poly(field, vec[i * (bound + 1) : (i + 1) * (bound + 1)]) for i in range(m)]
        )
    reduced, _ = weak_popov_columns(columns)
    if len(reduced) < m:
        raise BoundTooSmall(f"relations of y-degree <= {bound} have rank {len(reduced)} < {m}")
    return PolyMatrix.from_columns(field, reduced, "y")


def reduce_by_mm(g: BiPoly, basis: RelationBasis) -> BiPoly:
    """G in K[x,y]_{<(m, delta)} with G(x, a) = g(x, a) mod f."""
    if basis.module_kind != "M":
        raise BadParameters("reduction needs an M basis")
    m = basis.mu
    if g.x_degree() >= m:
        raise BadParameters(f"g has x-degree {g.x_degree()}, basis handles < {m}")
    v = [g.x_coeff(i) for i in range(m)]
    _, r = mat_divrem(v, basis.matrix)
    return BiPoly.from_x_coeffs(g.field, r, max(basis.delta, 1))


# === RANK CHARACTERIZATIONS ===


def _krylov_rank_degree(f: Poly, block: Sequence[Poly], step: Poly) -> int | None:
    """Smallest delta with rank [V, M V, ..., M^(delta-1) V] = n, M = multiplication by step."""
    n = _degree_of(f)
    field = f.field
    columns: list[list[int]] = []
    current = list(block)
    for delta in range(1, n + 1):
        columns.extend(c.padded(n) for c in current)
        matrix = [[col[r] for col in columns] for r in range(n)]
        if const_rank(matrix, field) == n:
            return delta
        current = [(c * step) % f for c in current]
    return None


def nmu_degree_by_rank(f: Poly, a: Poly, mu: int) -> int:
    """Degree of the N_mu Popov basis, read off the Krylov rank profile of x on the a-powers."""
    n = _degree_of(f)
    _check_mu(n, mu)
    x = Poly.monomial(f.field, 1) % f
    result = _krylov_rank_degree(f, _powers(a % f, f, mu), x)
    return n if result is None else result


def mm_degree_by_rank(f: Poly, a: Poly, m: int) -> int | None:
    """Smallest delta with rank [V_x, M_a V_x, ...] = n, or None if it never happens."""
    n = _degree_of(f)
    _check_mu(n, m)
    x = Poly.monomial(f.field, 1) % f
    block = _powers(x, f, m)
    return _krylov_rank_degree(f, block, a % f)


def x_power_witness(f: Poly, mu: int) -> Poly:
    """a = x^ceil(n/mu) rem f, an explicit input whose N_mu basis has the generic degree."""
    n = _degree_of(f)
    _check_mu(n, mu)
    return Poly.monomial(f.field, math.ceil(n / mu)) % f
