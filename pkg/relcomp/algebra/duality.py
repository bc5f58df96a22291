"""Block Krylov matrices, the transposition identity, characteristic polynomials
and inverse modular composition.

Everything here works on dense constant matrices and is meant for small n.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from relcomp.algebra.errors import (
    BadParameters,
    MinimalPolynomialDefect,
    NeedsUnitConstantTerm,
    NonGeneric,
    NotCoprime,
    NotInvertibleModF,
)
from relcomp.algebra.field import FieldSpec
from relcomp.algebra.polymat import ConstMatrix, const_det, const_mul, pm_det
from relcomp.algebra.relations import direct_truncated_table, mm_basis
from relcomp.algebra.upoly import Poly, poly_gcd, poly_inv_mod

logger = logging.getLogger(__name__)


def mult_matrix(t: Poly, u: Poly) -> ConstMatrix:
    """Matrix of multiplication by t modulo u in the monomial basis; column j is x^j t rem u."""
    if u.degree < 1:
        raise BadParameters("modulus must have positive degree")
    n = int(u.degree)
    cols = []
    cur = t % u
    for _ in range(n):
        cols.append(cur.padded(n))
        cur = cur.shift(1) % u
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _transpose(A: ConstMatrix) -> ConstMatrix:
    return [list(r) for r in zip(*A)] if A else []


def _identity(n: int) -> ConstMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# === KRYLOV AND STRUCTURED MATRICES ===


@dataclass(frozen=True)
class KrylovPair:
    """K = [X, M X, ..., M^(d-1) X] and L stacking X^T M^k, with X = [I_m 0]^T."""

    K: ConstMatrix
    L: ConstMatrix


@dataclass(frozen=True)
class StructuredMats:
    S: ConstMatrix
    Q: ConstMatrix
    P: ConstMatrix


def build_krylov(f: Poly, a: Poly, m: int, d: int) -> KrylovPair:
    n = int(f.degree) if not f.is_zero else 0
    if n < 1 or not 1 <= m <= n or d < 1:
        raise BadParameters(f"need 1 <= m <= n and d >= 1 (n={n}, m={m}, d={d})")
    field = f.field
    M = mult_matrix(a, f)
    K_cols: list[list[int]] = []
    L_rows: list[list[int]] = []
    Mk = _identity(n)
    for k in range(d):
        K_cols.extend([Mk[i][j] for i in range(n)] for j in range(m))
        L_rows.extend(list(Mk[i]) for i in range(m))
        if k + 1 < d:
            Mk = const_mul(M, Mk, field)
    return KrylovPair(K=_transpose(K_cols), L=L_rows)


def symmetrizer(f: Poly) -> ConstMatrix:
    """Triangular Hankel matrix with S[i][j] = f_(i+j+1) for i + j < n."""
    n = int(f.degree)
    return [[f.coeff(i + j + 1) if i + j < n else 0 for j in range(n)] for i in range(n)]


def build_structured(f: Poly, m: int) -> StructuredMats:
    n = int(f.degree) if not f.is_zero else 0
    if n < 1 or not 1 <= m <= n:
        raise BadParameters(f"need 1 <= m <= n (n={n}, m={m})")
    field = f.field
    p = field.p
    S = symmetrizer(f)
    # -M_{f, x^m} J_m: entry (i, j) is -f_(i - (m-1-j))
    Q = [[-f.coeff(i - (m - 1 - j)) % p if i >= m - 1 - j else 0 for j in range(m)] for i in range(m)]
    P = const_mul(mult_matrix(Poly.monomial(field, m), f), S, field)
    return StructuredMats(S=S, Q=Q, P=P)


@dataclass(frozen=True)
class TranspositionReport:
    symmetrizer_holds: bool
    block_identity_holds: bool
    q_invertible: bool
    p_invertible: bool

    @property
    def holds(self) -> bool:
        return self.symmetrizer_holds and self.block_identity_holds


def _block_diag(Q: ConstMatrix, copies: int) -> ConstMatrix:
    m = len(Q)
    out = [[0] * (m * copies) for _ in range(m * copies)]
    for b in range(copies):
        for i in range(m):
            out[b * m + i][b * m : (b + 1) * m] = Q[i]
    return out


def check_transposition_identity(f: Poly, a: Poly, m: int, d: int) -> TranspositionReport:
    """Checks S M^T = M S and L P = diag(Q, ..., Q) K^T exactly."""
    field = f.field
    pair = build_krylov(f, a, m, d)
    mats = build_structured(f, m)
    M = mult_matrix(a, f)
    sym = const_mul(mats.S, _transpose(M), field) == const_mul(M, mats.S, field)
    left = const_mul(pair.L, mats.P, field)
    right = const_mul(_block_diag(mats.Q, d), _transpose(pair.K), field)
    report = TranspositionReport(
        symmetrizer_holds=sym,
        block_identity_holds=left == right,
        q_invertible=const_det(mats.Q, field) != 0,
        p_invertible=const_det(mats.P, field) != 0,
    )
    logger.debug(f"transposition identity n={f.degree} m={m} d={d}: {report}")
    return report


# === CHARACTERISTIC POLYNOMIALS ===


class PrimeRing:
    """Scalars of GF(p) as plain residues."""

    def __init__(self, field: FieldSpec):
        self.p = field.p
        self.zero = 0
        self.one = 1

    def lift(self, c: int) -> int:
        return c % self.p

    def add(self, u: int, v: int) -> int:
        return (u + v) % self.p

    def neg(self, u: int) -> int:
        return -u % self.p

    def mul(self, u: int, v: int) -> int:
        return u * v % self.p


class DualRing:
    """Dual numbers u + v z with z^2 = 0 over GF(p), stored as pairs."""

    def __init__(self, field: FieldSpec):
        self.p = field.p
        self.zero = (0, 0)
        self.one = (1, 0)

    def lift(self, c: int) -> tuple[int, int]:
        return (c % self.p, 0)

    def add(self, u, v):
        p = self.p
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p)

    def neg(self, u):
        p = self.p
        return (-u[0] % p, -u[1] % p)

    def mul(self, u, v):
        p = self.p
        return (u[0] * v[0] % p, (u[0] * v[1] + u[1] * v[0]) % p)


def berkowitz(A: Sequence[Sequence], ring) -> list:
    """Coefficients of det(lambda I - A), highest degree first, without divisions."""
    n = len(A)
    vect = [ring.one]
    for r in range(n):
        # leading r x r block, column C above A[r][r] and row R to its left
        C = [A[i][r] for i in range(r)]
        R = [A[r][j] for j in range(r)]
        col = [ring.one, ring.neg(A[r][r])]
        w = C
        for _ in range(r):
            acc = ring.zero
            for rv, wv in zip(R, w):
                acc = ring.add(acc, ring.mul(rv, wv))
            col.append(ring.neg(acc))
            nxt = []
            for i in range(r):
                s = ring.zero
                for j in range(r):
                    s = ring.add(s, ring.mul(A[i][j], w[j]))
                nxt.append(s)
            w = nxt
        new = []
        for i in range(r + 2):
            s = ring.zero
            for j in range(max(0, i - len(col) + 1), min(i + 1, len(vect))):
                s = ring.add(s, ring.mul(col[i - j], vect[j]))
            new.append(s)
        vect = new
    return vect


def charpoly(a: Poly, f: Poly, via: str = "berkowitz", mu: int | None = None) -> Poly:
    """Characteristic polynomial of multiplication by a modulo f, as a monic polynomial in y."""
    if f.degree < 1:
        raise BadParameters("modulus must have positive degree")
    field = f.field
    n = int(f.degree)
    if via == "berkowitz":
        coeffs = berkowitz(mult_matrix(a, f), PrimeRing(field))
        return Poly(field, coeffs[::-1])
    if via != "basis":
        raise BadParameters(f"unknown charpoly method {via!r}")

    m = mu if mu is not None else math.isqrt(n - 1) + 1
    try:
        a_inv = poly_inv_mod(a % f, f)
        table = direct_truncated_table(f, a_inv, m, 2 * -(-n // m))
        basis = mm_basis(f, a, m, table)
    except (NotInvertibleModF, NeedsUnitConstantTerm, NotCoprime) as e:
        raise NonGeneric(f"no M basis for this input: {e}") from e
    det = pm_det(basis.matrix)
    if det.degree != n:
        raise NonGeneric(f"M basis determinant has degree {det.degree}, expected {n}")
    return det.monic()


# === INVERSE COMPOSITION ===


def inverse_compose(h: Poly, a: Poly, f: Poly) -> Poly:
    """The g of degree < n with g(a) = h mod f, for a with separable characteristic polynomial."""
    if f.degree < 1:
        raise BadParameters("modulus must have positive degree")
    field = f.field
    chi = charpoly(a, f)
    dchi = chi.derivative()
    if dchi.is_zero or poly_gcd(chi, dchi).degree != 0:
        raise MinimalPolynomialDefect("characteristic polynomial of a is not separable")

    # char poly of a + z h over GF(p)[z]/(z^2); its z-part gives the derivative at z = 0
    ring = DualRing(field)
    Ma, Mh = mult_matrix(a, f), mult_matrix(h, f)
    n = len(Ma)
    dual = [[(Ma[i][j], Mh[i][j]) for j in range(n)] for i in range(n)]
    coeffs = berkowitz(dual, ring)
    dz = Poly(field, [c[1] for c in reversed(coeffs)])

    inv = poly_inv_mod(dchi % chi, chi)
    return (-(dz * inv)) % chi


def compose_via_charpoly(g: Poly, a: Poly, f: Poly) -> Poly:
    """g(a) rem f through two inverse compositions."""
    field = f.field
    chi = charpoly(a, f)
    alpha = inverse_compose(Poly.monomial(field, 1) % f, a, f)
    gamma = inverse_compose(g % chi, alpha, chi)
    return gamma % f
