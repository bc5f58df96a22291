"""Polynomial matrices: products, degree profiles, Popov forms, approximant bases.

Entries are univariate ``Poly`` objects; ``var`` only records which variable the
matrix is written in (``"x"`` or ``"y"``). Constant matrices are plain lists of
lists of residues and are handled by the ``const_*`` helpers at the bottom.

Pivot convention used throughout: in column j the pivot is the last row index
attaining the shifted column degree, and a matrix in shifted Popov form has its
pivots on the diagonal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from relcomp.algebra.errors import (
    DimMismatch,
    SingularBasis,
    SmallFieldError,
    ZeroColumn,
)
from relcomp.algebra.field import FieldSpec
from relcomp.algebra.upoly import DEG_ZERO, Poly, interpolate

logger = logging.getLogger(__name__)

Shift = Sequence[int]
ConstMatrix = list[list[int]]


class PolyMatrix:
    """Immutable rows x cols matrix of polynomials over one field."""

    __slots__ = ("field", "rows", "cols", "entries", "var")

    def __init__(
        self, field: FieldSpec, entries: Sequence[Sequence[Poly]], var: str = "x", cols: int | None = None
    ):
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        for r in entries:
            if len(r) != cols:
                raise DimMismatch("rows of a polynomial matrix differ in length")
            for e in r:
                if e.field != field:
                    raise DimMismatch(f"entry over GF({e.field.p}) in a GF({field.p}) matrix")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = tuple(tuple(r) for r in entries)
        self.var = var

    @classmethod
    def identity(cls, field: FieldSpec, size: int, var: str = "x") -> PolyMatrix:
        one, zero = Poly.constant(field, 1), Poly.zero(field)
        return cls(field, [[one if i == j else zero for j in range(size)] for i in range(size)], var, size)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int, var: str = "x") -> PolyMatrix:
        zero = Poly.zero(field)
        return cls(field, [[zero] * cols for _ in range(rows)], var, cols)

    @classmethod
    def from_constant(cls, field: FieldSpec, table: Sequence[Sequence[int]], var: str = "x") -> PolyMatrix:
        cols = len(table[0]) if table else 0
        return cls(field, [[Poly.constant(field, c) for c in r] for r in table], var, cols)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence[Poly]], var: str = "x") -> PolyMatrix:
        if not columns:
            return cls(field, [], var, 0)
        rows = len(columns[0])
        return cls(field, [[c[i] for c in columns] for i in range(rows)], var, len(columns))

    # --- views ---

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[Poly]:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list[Poly]]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        return PolyMatrix(self.field, [[self.entries[i][j] for j in cols] for i in rows], self.var, len(cols))

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.field, [list(c) for c in self.columns()], self.var, self.rows)

    @property
    def degree(self) -> int | float:
        return max((e.degree for r in self.entries for e in r), default=DEG_ZERO)

    def column_degrees(self, shift: Shift | None = None) -> list[int | float]:
        s = shift if shift is not None else [0] * self.rows
        if len(s) != self.rows:
            raise DimMismatch(f"shift of length {len(s)} for {self.rows} rows")
        return [
            max((self.entries[i][j].degree + s[i] for i in range(self.rows)), default=DEG_ZERO)
            for j in range(self.cols)
        ]

    def leading_matrix(self, shift: Shift | None = None) -> ConstMatrix:
        s = shift if shift is not None else [0] * self.rows
        cdeg = self.column_degrees(s)
        lm = [[0] * self.cols for _ in range(self.rows)]
        for j, dj in enumerate(cdeg):
            if dj == DEG_ZERO:
                continue
            for i in range(self.rows):
                lm[i][j] = self.entries[i][j].coeff(int(dj) - s[i])
        return lm

    def pivot_index(self, j: int, shift: Shift | None = None) -> int:
        """Last row attaining the shifted degree of column j (-1 for a zero column)."""
        s = shift if shift is not None else [0] * self.rows
        best, where = DEG_ZERO, -1
        for i in range(self.rows):
            d = self.entries[i][j].degree + s[i]
            if d != DEG_ZERO and d >= best:
                best, where = d, i
        return where

    def coefficient_matrix(self, k: int) -> ConstMatrix:
        return [[e.coeff(k) for e in r] for r in self.entries]

    def evaluate(self, point: int) -> ConstMatrix:
        return [[e(point) for e in r] for r in self.entries]

    # --- arithmetic ---

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimMismatch("matrix sum of different shapes")
        return PolyMatrix(
            self.field,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
            self.var,
            self.cols,
        )

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + other.scale(-1)

    def scale(self, c: int) -> PolyMatrix:
        return PolyMatrix(self.field, [[e.scale(c) for e in r] for r in self.entries], self.var, self.cols)

    def __mul__(self, other: PolyMatrix) -> PolyMatrix:
        return pm_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash((self.field.p, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e.coeffs) for e in r) for r in self.entries)
        return f"PolyMatrix[{self.rows}x{self.cols} in {self.var}]({body})"


def pm_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    """Classical product; entry products go through the univariate multiplier."""
    if A.cols != B.rows:
        raise DimMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    field = A.field
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = Poly.zero(field)
            for k in range(A.cols):
                a, b = A.entries[i][k], B.entries[k][j]
                if a.coeffs and b.coeffs:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return PolyMatrix(field, out, A.var, B.cols)


def pm_const_mul(A: PolyMatrix, C: ConstMatrix) -> PolyMatrix:
    """A times a constant matrix."""
    if A.cols != len(C):
        raise DimMismatch("constant factor has the wrong number of rows")
    field = A.field
    cols = len(C[0]) if C else 0
    out = []
    for i in range(A.rows):
        row = []
        for j in range(cols):
            acc = Poly.zero(field)
            for k in range(A.cols):
                if C[k][j]:
                    acc = acc + A.entries[i][k].scale(C[k][j])
            row.append(acc)
        out.append(row)
    return PolyMatrix(field, out, A.var, cols)


# === FORM PREDICATES ===


@dataclass(frozen=True)
class FormReport:
    column_degrees: tuple[int, ...]
    leading_matrix: tuple[tuple[int, ...], ...]
    is_column_reduced: bool
    is_weak_popov: bool
    is_popov: bool
    is_shifted_popov: bool


def _diagonal_dominance(P: PolyMatrix, shift: Shift) -> bool:
    for j in range(P.cols):
        dj = P.entries[j][j].degree + shift[j]
        if P.entries[j][j].is_zero:
            return False
        for i in range(P.rows):
            if i == j:
                continue
            di = P.entries[i][j].degree + shift[i]
            if di > dj or (i > j and di == dj):
                return False
    return True


def _row_normalized(P: PolyMatrix) -> bool:
    for i in range(P.rows):
        pii = P.entries[i][i]
        if pii.lc != 1:
            return False
        for j in range(P.cols):
            if j != i and P.entries[i][j].degree >= pii.degree:
                return False
    return True


def form_predicates(P: PolyMatrix, shift: Shift | None = None) -> FormReport:
    """Column degrees, leading matrix and the reduced/Popov predicates of a square P."""
    if P.rows != P.cols:
        raise DimMismatch("form predicates need a square matrix")
    s = list(shift) if shift is not None else [0] * P.rows
    cdeg = P.column_degrees()
    if any(d == DEG_ZERO for d in cdeg):
        raise ZeroColumn(f"column {cdeg.index(DEG_ZERO)} is zero")
    lm = P.leading_matrix()
    reduced = const_det(lm, P.field) != 0
    weak = _diagonal_dominance(P, [0] * P.rows)
    normalized = _row_normalized(P)
    return FormReport(
        column_degrees=tuple(int(d) for d in cdeg),
        leading_matrix=tuple(tuple(r) for r in lm),
        is_column_reduced=reduced,
        is_weak_popov=weak,
        is_popov=weak and normalized,
        is_shifted_popov=_diagonal_dominance(P, s) and normalized,
    )


# === APPROXIMANT BASES ===


def _axpy(dst: list[int], src: list[int], lam: int, p: int, start: int = 0):
    """dst -= lam * src in place, from index start on."""
    if len(dst) < len(src):
        dst.extend([0] * (len(src) - len(dst)))
    for k in range(start, len(src)):
        if src[k]:
            dst[k] = (dst[k] - lam * src[k]) % p


def weak_approximant_basis(
    F: PolyMatrix, order: int, shift: Shift
) -> tuple[PolyMatrix, list[int]]:
    """Shifted weak Popov basis of {w : w^T F = 0 mod v^order}, one constraint at a time.

    Returns the basis (columns are approximants, pivots on the diagonal) and
    the shifted column degrees.
    """
    r, c = F.rows, F.cols
    if len(shift) != r:
        raise DimMismatch(f"shift of length {len(shift)} for {r} rows")
    p = F.field.p
    cols = [[[1] if i == j else [] for i in range(r)] for j in range(r)]
    res = [[F.entries[j][cc].padded(order) for cc in range(c)] for j in range(r)]
    deg = list(shift)

    for k in range(order):
        for cc in range(c):
            live = [j for j in range(r) if res[j][cc][k]]
            if not live:
                continue
            piv = min(live, key=lambda j: (deg[j], j))
            inv = F.field.inv(res[piv][cc][k])
            for j in live:
                if j == piv:
                    continue
                lam = res[j][cc][k] * inv % p
                for i in range(r):
                    _axpy(cols[j][i], cols[piv][i], lam, p)
                for t in range(c):
                    _axpy(res[j][t], res[piv][t], lam, p, k)
            cols[piv] = [[0] + e if e else e for e in cols[piv]]
            res[piv] = [[0] + t[: order - 1] for t in res[piv]]
            deg[piv] += 1

    columns = [[Poly(F.field, e) for e in col] for col in cols]
    return PolyMatrix.from_columns(F.field, columns, F.var), deg


def approximant_basis(F: PolyMatrix, order: int, shift: Shift | None = None) -> PolyMatrix:
    """Shifted Popov basis of all approximants of order ``order`` for F."""
    if order < 1:
        raise ValueError("approximation order must be at least 1")
    s = list(shift) if shift is not None else [0] * F.rows
    weak, _ = weak_approximant_basis(F, order, s)
    pivots = [int(weak.entries[j][j].degree) for j in range(weak.cols)]
    # a basis reduced for the shift -pivots has constant leading matrix U,
    # and the Popov basis is that basis times U^-1
    t = [-d for d in pivots]
    reduced, _ = weak_approximant_basis(F, order, t)
    lm = reduced.leading_matrix(t)
    return pm_const_mul(reduced, const_inverse(lm, F.field))


# === GENERATORS, NORMAL FORMS, DIVISION ===


@dataclass(frozen=True)
class MatrixGenerator:
    matrix: PolyMatrix
    degenerate: bool = False


def matrix_generator(H: Sequence[ConstMatrix], field: FieldSpec) -> MatrixGenerator:
    """Minimal right generator R(y) of the sequence H_0, H_1, ... of m x m matrices.

    Columns p of R satisfy H(y) p(y) = q(y) mod y^len(H) with deg q < deg p,
    where H(y) = sum_k H_k y^k. R is in Popov form.
    """
    sigma = len(H)
    if sigma < 2:
        raise ValueError("a matrix generator needs at least two terms")
    m = len(H[0])
    if not any(v for Hk in H for row in Hk for v in row):
        logger.debug("matrix generator: all-zero sequence")
        return MatrixGenerator(PolyMatrix.identity(field, m, "y"), degenerate=True)

    p = field.p
    entries = []
    for i in range(m):
        entries.append([Poly(field, [H[k][c][i] for k in range(sigma)]) for c in range(m)])
    for i in range(m):
        entries.append([Poly.constant(field, -1 % p) if c == i else Poly.zero(field) for c in range(m)])
    F = PolyMatrix(field, entries, "y", m)
    basis = approximant_basis(F, sigma, [0] * (2 * m))
    return MatrixGenerator(basis.submatrix(range(m), range(m)))


def weak_popov_columns(
    columns: Sequence[Sequence[Poly]], track: bool = False
) -> tuple[list[list[Poly]], list[list[Poly]] | None]:
    """Mulders-Storjohann reduction of a generating set of columns to weak Popov form.

    Zero columns are dropped and the survivors are ordered by pivot row. With
    ``track`` the column operations are replayed on the identity and returned
    as the columns of a transform U (so that result = input * U).
    """
    if not columns:
        return [], [] if track else None
    field = columns[0][0].field
    rows = len(columns[0])
    work = [list(c) for c in columns]
    k = len(work)
    trans = None
    if track:
        one, zero = Poly.constant(field, 1), Poly.zero(field)
        trans = [[one if i == j else zero for i in range(k)] for j in range(k)]

    def pivot(col: list[Poly]) -> tuple[int, int | float]:
        best, where = DEG_ZERO, -1
        for i in range(rows):
            d = col[i].degree
            if d != DEG_ZERO and d >= best:
                best, where = d, i
        return where, best

    alive = [j for j in range(k) if pivot(work[j])[0] >= 0]
    while True:
        seen: dict[int, int] = {}
        clash = None
        for j in alive:
            pi, _ = pivot(work[j])
            if pi in seen:
                clash = (seen[pi], j, pi)
                break
            seen[pi] = j
        if clash is None:
            break
        a, b, pi = clash
        if work[a][pi].degree < work[b][pi].degree:
            a, b = b, a
        shift = int(work[a][pi].degree - work[b][pi].degree)
        c = work[a][pi].lc * field.inv(work[b][pi].lc) % field.p
        work[a] = [u - v.shift(shift).scale(c) for u, v in zip(work[a], work[b])]
        if trans is not None:
            trans[a] = [u - v.shift(shift).scale(c) for u, v in zip(trans[a], trans[b])]
        if pivot(work[a])[0] < 0:
            alive.remove(a)

    alive.sort(key=lambda j: pivot(work[j])[0])
    result = [work[j] for j in alive]
    return result, ([trans[j] for j in alive] if trans is not None else None)


def popov_form(R: PolyMatrix, shift: Shift | None = None) -> tuple[PolyMatrix, PolyMatrix]:
    """Shifted Popov basis P of the column space of a shifted column reduced R, with P = R U."""
    m = R.rows
    if R.cols != m:
        raise DimMismatch("Popov normalization needs a square matrix")
    s = list(shift) if shift is not None else [0] * m
    cdeg = R.column_degrees(s)
    if any(d == DEG_ZERO for d in cdeg):
        raise SingularBasis("zero column")
    field = R.field
    p = field.p
    one, zero = Poly.constant(field, 1), Poly.zero(field)
    entries = [[one if i == j else zero for j in range(m)] for i in range(m)]
    entries += [[R.entries[j][i].scale(p - 1) for j in range(m)] for i in range(m)]
    F = PolyMatrix(field, entries, R.var, m)
    spread = max(s) - min(s)
    order = 2 * int(R.degree) + 2 * spread + 2
    kernel = approximant_basis(F, order, s + [int(d) - 1 for d in cdeg])
    P = kernel.submatrix(range(m), range(m))
    U = kernel.submatrix(range(m, 2 * m), range(m))
    return P, U


def _divide_by_popov(v: list[Poly], P: PolyMatrix) -> tuple[list[Poly], list[Poly]]:
    m = P.rows
    field = P.field
    piv = [int(P.entries[i][i].degree) for i in range(m)]
    q = [Poly.zero(field) for _ in range(m)]
    r = list(v)
    while True:
        excess = [r[i].degree - piv[i] for i in range(m)]
        top = max(excess)
        if top < 0:
            break
        e = int(top)
        for i in range(m):
            if r[i].degree - piv[i] != e:
                continue
            c = r[i].lc
            term = Poly.monomial(field, e, c)
            q[i] = q[i] + term
            col = P.column(i)
            r = [rk - (pk * term) for rk, pk in zip(r, col)]
    return q, r


def mat_divrem(v: Sequence[Poly], R: PolyMatrix) -> tuple[list[Poly], list[Poly]]:
    """v = R q + r with r reduced against the Popov form of R's column space."""
    if R.rows != R.cols:
        raise DimMismatch("division needs a square basis")
    if len(v) != R.rows:
        raise DimMismatch(f"vector of length {len(v)} for a {R.rows}x{R.rows} basis")
    m = R.rows
    if any(d == DEG_ZERO for d in R.column_degrees()):
        raise SingularBasis("basis has a zero column")

    report = form_predicates(R)
    if report.is_popov:
        return _divide_by_popov(list(v), R)

    transform = None
    work = R
    if not report.is_column_reduced:
        reduced, trans = weak_popov_columns(R.columns(), track=True)
        if len(reduced) < m:
            raise SingularBasis("basis columns are linearly dependent")
        work = PolyMatrix.from_columns(R.field, reduced, R.var)
        transform = PolyMatrix.from_columns(R.field, trans, R.var)
    P, U = popov_form(work)
    if transform is not None:
        U = pm_mul(transform, U)
    q_star, r = _divide_by_popov(list(v), P)
    qcol = pm_mul(U, PolyMatrix(R.field, [[x] for x in q_star], R.var, 1))
    return qcol.column(0), r


# === DETERMINANTS ===


def _cofactor_det(P: PolyMatrix) -> Poly:
    e = P.entries
    n = P.rows
    if n == 0:
        return Poly.constant(P.field, 1)
    if n == 1:
        return e[0][0]
    if n == 2:
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]
    return (
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
    )


def pm_det(P: PolyMatrix) -> Poly:
    """Exact determinant: cofactors up to 3x3, evaluation and interpolation beyond."""
    if P.rows != P.cols:
        raise DimMismatch("determinant of a non-square matrix")
    if P.rows <= 3:
        return _cofactor_det(P)
    cdeg = P.column_degrees()
    if any(d == DEG_ZERO for d in cdeg):
        return Poly.zero(P.field)
    points = int(sum(cdeg)) + 1
    if points > P.field.p:
        raise SmallFieldError(f"need {points} distinct points, field has {P.field.p}")
    xs = list(range(points))
    values = [const_det(P.evaluate(x), P.field) for x in xs]
    return interpolate(P.field, xs, values)


# === CONSTANT MATRICES ===


def const_mul(A: ConstMatrix, B: ConstMatrix, field: FieldSpec) -> ConstMatrix:
    if A and len(A[0]) != len(B):
        raise DimMismatch("inner dimensions differ")
    p = field.p
    cols = len(B[0]) if B else 0
    Bt = [[B[k][j] for k in range(len(B))] for j in range(cols)]
    return [[sum(a * b for a, b in zip(row, col)) % p for col in Bt] for row in A]


def const_rref(A: ConstMatrix, field: FieldSpec) -> tuple[ConstMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    p = field.p
    M = [[v % p for v in row] for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if M[i][c]), None)
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        inv = field.inv(M[r][c])
        M[r] = [v * inv % p for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                lam = M[i][c]
                M[i] = [(a - lam * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def const_rank(A: ConstMatrix, field: FieldSpec) -> int:
    return len(const_rref(A, field)[1])


def const_kernel(A: ConstMatrix, field: FieldSpec, cols: int | None = None) -> list[list[int]]:
    """Basis of the right kernel {v : A v = 0}."""
    p = field.p
    ncols = len(A[0]) if A else (cols or 0)
    M, pivots = const_rref(A, field) if A else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(M, pivots):
            v[pc] = -row[fc] % p
        basis.append(v)
    return basis


def const_det(A: ConstMatrix, field: FieldSpec) -> int:
    p = field.p
    M = [[v % p for v in row] for row in A]
    n = len(M)
    det = 1
    for c in range(n):
        sel = next((i for i in range(c, n) if M[i][c]), None)
        if sel is None:
            return 0
        if sel != c:
            M[c], M[sel] = M[sel], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = field.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                lam = M[i][c] * inv % p
                M[i] = [(a - lam * b) % p for a, b in zip(M[i], M[c])]
    return det % p


def const_inverse(A: ConstMatrix, field: FieldSpec) -> ConstMatrix:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    M, pivots = const_rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise SingularBasis("constant matrix is singular")
    return [row[n:] for row in M]
