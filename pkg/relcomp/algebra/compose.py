"""Modular composition g(a) rem f and bivariate composition G(x, a) rem f.

Baselines (Horner, Brent-Kung, Nuesken-Ziegler) have no genericity requirement.
The relation-based algorithms refuse with NonGeneric instead of returning an
uncertified answer.
"""
from __future__ import annotations

import contextlib
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from relcomp.algebra.bipoly import BiPoly, bi_mul, eval_y, inverse_kronecker, kronecker_pack, kronecker_unpack
from relcomp.algebra.errors import (
    BadParameters,
    BlockTooSmall,
    DivisionByZero,
    DuplicateAbscissa,
    NonGeneric,
    NotCoprime,
    NotInvertibleModF,
)
from relcomp.algebra.polymat import PolyMatrix, const_mul, pm_mul
from relcomp.algebra.relations import (
    check_power_tables,
    mm_basis,
    powers_AB,
    reduce_by_mm,
)
from relcomp.algebra.truncated import recover_shifted_truncations, truncated_powers
from relcomp.algebra.upoly import (
    Poly,
    interpolate,
    multipoint_eval,
    poly_inv_mod,
    powmod,
    subproduct_tree,
)

logger = logging.getLogger(__name__)


def ceil_root(n: int, k: int) -> int:
    """Smallest r >= 1 with r^k >= n."""
    if n <= 1:
        return 1
    r = max(1, int(round(n ** (1.0 / k))))
    while r**k < n:
        r += 1
    while r > 1 and (r - 1) ** k >= n:
        r -= 1
    return r


@dataclass(frozen=True)
class ComposeParams:
    n: int
    m: int
    d: int
    mu: int

    def __post_init__(self):
        if min(self.n, self.m, self.d, self.mu) < 1:
            raise BadParameters(f"parameters must be positive: {self}")
        if self.mu > self.n or self.d > self.mu**3:
            raise BadParameters(f"need d^(1/3) <= mu <= n: {self}")

    @classmethod
    def for_degree(cls, n: int) -> ComposeParams:
        m = ceil_root(n, 4)
        return cls(n=n, m=m, d=-(-n // m), mu=m)

    @property
    def delta(self) -> int:
        """Generic degree of the N_mu and M_m bases."""
        return -(-self.n // self.mu)


def _check_modulus(f: Poly):
    if f.is_zero:
        raise DivisionByZero("composition modulo the zero polynomial")


# === BASELINES ===


def horner_compose(g: Poly, a: Poly, f: Poly) -> Poly:
    """g(a) rem f by Horner's rule."""
    _check_modulus(f)
    a = a % f
    acc = Poly.zero(f.field)
    for c in reversed(g.coeffs):
        acc = (acc * a + Poly.constant(f.field, c)) % f
    return acc


def brent_kung_compose(g: Poly, a: Poly, f: Poly) -> Poly:
    """Baby steps / giant steps, with an outer Horner loop over y^n-adic segments of g."""
    _check_modulus(f)
    field = f.field
    n = int(f.degree)
    if n == 0 or g.is_zero:
        return Poly.zero(field)
    a = a % f
    coeffs = list(g.coeffs)
    m = math.isqrt(min(len(coeffs), n) - 1) + 1

    baby = [Poly.constant(field, 1) % f]
    for _ in range(1, m):
        baby.append((baby[-1] * a) % f)
    baby_rows = [b.padded(n) for b in baby]
    giant = (baby[-1] * a) % f

    def block(chunk: list[int]) -> Poly:
        rows = -(-len(chunk) // m)
        gmat = [chunk[i * m : (i + 1) * m] + [0] * max(0, (i + 1) * m - len(chunk)) for i in range(rows)]
        sums = const_mul(gmat, baby_rows, field)
        acc = Poly.zero(field)
        for row in reversed(sums):
            acc = (acc * giant + Poly(field, row)) % f
        return acc

    segments = [coeffs[s : s + n] for s in range(0, len(coeffs), n)]
    if len(segments) == 1:
        return block(segments[0])
    an = powmod(a, n, f)
    acc = Poly.zero(field)
    for seg in reversed(segments):
        acc = (acc * an + block(seg)) % f
    return acc


def power_series_compose(g: Poly, a: Poly, alpha: int) -> Poly:
    """g(a) mod x^alpha."""
    if alpha < 1:
        raise BadParameters("series precision must be positive")
    return brent_kung_compose(g, a, Poly.monomial(a.field, alpha))


def crt_combine(h1: Poly, m1: Poly, h2: Poly, m2: Poly) -> Poly:
    """The h of degree < deg(m1 m2) with h = h1 mod m1 and h = h2 mod m2."""
    try:
        inv = poly_inv_mod(m1 % m2, m2)
    except NotInvertibleModF as e:
        raise NotCoprime("CRT moduli share a factor") from e
    h = h1 + m1 * (((h2 - h1) * inv) % m2)
    return h % (m1 * m2)


def nz_bivariate_compose(G: BiPoly, a: Poly, f: Poly) -> Poly:
    """G(x, a) rem f with baby steps in y and giant steps in a^m'."""
    _check_modulus(f)
    field = f.field
    d = G.ybound
    if d == 0 or G.is_zero:
        return Poly.zero(field)
    a = a % f
    step = math.isqrt(d - 1) + 1
    powers = [Poly.constant(field, 1) % f]
    for _ in range(1, step):
        powers.append((powers[-1] * a) % f)
    giant = (powers[-1] * a) % f

    outer = -(-d // step)
    gmat = PolyMatrix(
        field, [[G.y_coeff(i1 * step + i0) for i0 in range(step)] for i1 in range(outer)], "x", step
    )
    avec = PolyMatrix(field, [[pw] for pw in powers], "x", 1)
    partial = pm_mul(gmat, avec).column(0)
    acc = Poly.zero(field)
    for s in reversed(partial):
        acc = (acc * giant + s) % f
    return acc


# === BIVARIATE COMPOSITION ===


def bivariate_compose(
    G: BiPoly,
    f: Poly,
    a: Poly,
    A: Sequence[BiPoly],
    B: Sequence[BiPoly],
    mu: int,
    tables_checked: bool = False,
) -> Poly:
    """G(x, a) rem f from the power tables A_j, B_j, for y-degree < mu^3."""
    _check_modulus(f)
    field = f.field
    n = int(f.degree)
    if mu < 1 or mu > n:
        raise BadParameters(f"block size {mu} outside [1, {n}]")
    if G.y_degree() >= mu**3:
        raise BlockTooSmall(f"y-degree {G.y_degree()} needs mu^3 > {G.y_degree()}, mu = {mu}")
    a = a % f
    delta = check_power_tables(f, a, mu, A, B, spot_check=not tables_checked)
    if delta != -(-n // mu):
        raise NonGeneric(f"power tables have degree {delta}, expected {-(-n // mu)}")
    if G.is_zero:
        return Poly.zero(field)
    G = G.with_bounds(max(G.x_degree() + 1, 1), min(G.ybound, mu**3))
    Gbar = inverse_kronecker(G, mu)

    # 1: partial sums s_i2 = sum_i1 s_i1i2 A_i1, with A expanded x^e-adically
    e = max(1, -(-delta // mu))
    stride = 2 * mu - 1
    smat = PolyMatrix(
        field,
        [[kronecker_pack(Gbar.block(i1, i2), stride) for i1 in range(mu)] for i2 in range(mu)],
        "x",
        mu,
    )
    pieces = -(-delta // e)
    amat = PolyMatrix(
        field,
        [
            [kronecker_pack(_x_piece(A[i1], t * e, e, mu), stride) for t in range(pieces)]
            for i1 in range(mu)
        ],
        "x",
        pieces,
    )
    prod = pm_mul(smat, amat)
    sums = []
    for i2 in range(mu):
        acc = BiPoly.zero(field, 1, stride)
        for t in range(pieces):
            acc = acc + kronecker_unpack(prod.entries[i2][t], stride).shift_x(t * e)
        sums.append(acc)

    # 2: S = sum_i2 s_i2 B_i2
    S = BiPoly.zero(field, 1, 1)
    for i2 in range(mu):
        S = S + bi_mul(sums[i2], B[i2])

    # 3: Horner in y at a
    return eval_y(S, a, f)


def _x_piece(P: BiPoly, start: int, width: int, ybound: int) -> BiPoly:
    rows = [list(P.rows[i]) if i < P.xbound else [] for i in range(start, start + width)]
    return BiPoly(P.field, rows, width, ybound)


# === UNIVARIATE PIPELINE ===


def univariate_compose(g: Poly, a: Poly, f: Poly, timer=None) -> Poly:
    """g(a) rem f through relation bases, or NonGeneric.

    ``timer`` may be any object with a ``phase(name)`` context manager.
    """
    _check_modulus(f)
    field = f.field
    n = int(f.degree)
    if n == 0:
        return Poly.zero(field)
    a = a % f
    if a.degree < 1:
        return Poly.constant(field, g(a.coeff(0))) % f

    def phase(name: str):
        return timer.phase(name) if timer is not None else contextlib.nullcontext()

    if f.coeff(0) == 0:
        alpha = int(f.valuation())
        f_star = Poly(field, f.coeffs[alpha:])
        with phase("series"):
            h1 = power_series_compose(g, a, alpha)
        if f_star.degree == 0:
            return h1
        h2 = univariate_compose(g, a % f_star, f_star, timer)
        with phase("crt"):
            return crt_combine(h1, Poly.monomial(field, alpha), h2, f_star)

    params = ComposeParams.for_degree(n)
    m, d, mu = params.m, params.d, params.mu
    logger.debug(f"univariate compose: n={n} m={m} d={d} mu={mu}")

    with phase("basis"):
        try:
            a_inv = poly_inv_mod(a, f)
        except NotInvertibleModF as e:
            raise NonGeneric("a is not invertible modulo f") from e
        A, B, basis = powers_AB(f, a, mu)
        if basis.delta != params.delta:
            raise NonGeneric(f"N basis of a has degree {basis.delta}, expected {params.delta}")
        Ai, Bi, basis_inv = powers_AB(f, a_inv, mu)
        if basis_inv.delta != params.delta:
            raise NonGeneric(f"N basis of a^-1 has degree {basis_inv.delta}, expected {params.delta}")
        check_power_tables(f, a, mu, A, B)
        check_power_tables(f, a_inv, mu, Ai, Bi)

    with phase("truncated_powers"):
        width = 2 * m - 1
        b1 = Poly.monomial(field, m - 1) % f
        a_inv_d = powmod(a_inv, d, f)
        b2 = (b1 * a_inv_d) % f
        rows = truncated_powers(f, a_inv, b1, width, d, mu, Ai, Bi, tables_checked=True)[1:]
        rows += truncated_powers(f, a_inv, b2, width, d, mu, Ai, Bi, tables_checked=True)
        rows.append(((b2 * a_inv_d) % f).truncate(width))
        table = recover_shifted_truncations(f, rows, m)

    with phase("m_basis"):
        basis_m = mm_basis(f, a, m, table)

    with phase("reduction"):
        G = reduce_by_mm(BiPoly.from_y_poly(g, max(len(g.coeffs), 1)), basis_m)

    with phase("composition"):
        return bivariate_compose(G, f, a, A, B, mu, tables_checked=True)


# === MULTIPOINT EVALUATION ===


def multipoint_eval_bivariate(G: BiPoly, points: Sequence[tuple[int, int]]) -> list[int]:
    """G(x_i, y_i) for points with pairwise distinct abscissae, or NonGeneric."""
    field = G.field
    p = field.p
    xs = [x % p for x, _ in points]
    ys = [y % p for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("abscissae must be pairwise distinct")
    if not xs:
        return []
    f = subproduct_tree(xs, field)[-1][0]
    a = interpolate(field, xs, ys)
    n = len(xs)
    # G mod prod(y - y_i) in y takes the same values on the points
    q = subproduct_tree(sorted(set(ys)), field)[-1][0]
    if G.y_degree() >= q.degree:
        G = BiPoly.from_x_coeffs(field, [G.x_coeff(i) % q for i in range(G.xbound)], int(q.degree))
    mu = ceil_root(max(G.y_degree() + 1, 1), 3)
    A, B, basis = powers_AB(f, a, mu)
    if not basis.generic:
        raise NonGeneric(f"N basis degree {basis.delta} for n={n}, mu={mu}")
    h = bivariate_compose(G, f, a, A, B, mu)
    return multipoint_eval(h, xs)
