"""Truncated powers [b a^k rem f]_0^(m-1) without forming the full powers.

Polynomials with coefficients in K[y]/(y^L) are carried as BiPoly values
(x-major); a product "in the ring" is a bivariate product truncated in y.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from relcomp.algebra.bipoly import (
    BiPoly,
    bi_mul,
    bi_rem,
    kronecker_pack,
    kronecker_unpack,
    x_slice,
    y_reverse,
)
from relcomp.algebra.errors import BadParameters, NeedsUnitConstantTerm
from relcomp.algebra.field import FieldSpec
from relcomp.algebra.polymat import PolyMatrix, pm_mul
from relcomp.algebra.relations import TruncatedPowerTable, check_power_tables
from relcomp.algebra.upoly import Poly, series_inv

logger = logging.getLogger(__name__)


def _x_reverse(B: BiPoly, k: int) -> BiPoly:
    """x^k B(1/x, y); requires x-degree <= k."""
    if B.x_degree() > k:
        raise BadParameters(f"x-degree {B.x_degree()} exceeds reversal bound {k}")
    blank = (0,) * B.ybound
    rows = [B.rows[i] if i < B.xbound else blank for i in range(k, -1, -1)]
    return BiPoly(B.field, rows, k + 1, B.ybound)


def _monic(f: Poly) -> Poly:
    return f if f.lc == 1 else f.monic()


def ring_mul_mod(A: BiPoly, B: BiPoly, f: Poly, ytrunc: int) -> BiPoly:
    """A*B rem f with coefficients in K[y]/(y^ytrunc)."""
    return bi_rem(bi_mul(A, B, ytrunc=ytrunc), f)


# === HIGH PART OF A REMAINDER ===


def high_part_rem(P_high, Q, f: Poly, t: int, d: int, ytrunc: int | None = None):
    """[P Q rem f]_(n-t)^(t-1) from [P]_(n-t-d+1)^(t+d-2) and Q of x-degree < d.

    P_high and Q are BiPoly (coefficients in K[y]/(y^ytrunc)) or Poly; the
    result has the same kind as P_high.
    """
    scalar = isinstance(P_high, Poly)
    if scalar:
        P_high = BiPoly.from_x_poly(P_high)
    if isinstance(Q, Poly):
        Q = BiPoly.from_x_poly(Q)
    n = int(f.degree)
    if not 1 <= d <= n or not 1 <= t <= n - d + 1:
        raise BadParameters(f"need 1 <= d <= n and 1 <= t <= n-d+1 (n={n}, d={d}, t={t})")
    if Q.x_degree() >= d:
        raise BadParameters(f"Q has x-degree {Q.x_degree()}, bound is {d}")
    L = ytrunc if ytrunc is not None else max(P_high.ybound, Q.ybound)
    field = f.field
    f = _monic(f)
    width = t + d - 1
    P_high = P_high.with_bounds(width, P_high.ybound) if P_high.xbound != width else P_high

    if d == 1:
        h = BiPoly.zero(field, 1, 1)
    else:
        p_rev = _x_reverse(x_slice(P_high, t, d - 2), d - 2)
        q_rev = _x_reverse(Q.truncate_x(d), d - 1)
        f_rev_inv = series_inv(f.reverse(n), d - 1)
        num = bi_mul(p_rev, q_rev, xtrunc=d - 1, ytrunc=L)
        h_rev = bi_mul(num, BiPoly.from_x_poly(f_rev_inv), xtrunc=d - 1, ytrunc=L)
        h = _x_reverse(h_rev, d - 2)

    f_slice = BiPoly.from_x_poly(f.slice(n - t - d + 1, t + d - 2))
    full = bi_mul(P_high, Q, ytrunc=L) - bi_mul(h, f_slice, ytrunc=L)
    out = x_slice(full, d - 1, t - 1).truncate_y(L)
    if scalar:
        return out.y_coeff(0)
    return out


# === SIMULTANEOUS TRUNCATED PRODUCTS ===


def _x_blocks(B: BiPoly, width: int, count: int) -> list[BiPoly]:
    return [x_slice(B, s * width, width - 1) for s in range(count)]


def _block_product(
    field: FieldSpec, left: list[list[BiPoly]], right: list[list[BiPoly]], stride: int
) -> list[list[BiPoly]]:
    """Matrix product of BiPoly blocks through one Kronecker-packed polynomial matrix product."""
    if not left or not right:
        return []
    L = PolyMatrix(field, [[kronecker_pack(e, stride) for e in row] for row in left], "x")
    R = PolyMatrix(field, [[kronecker_pack(e, stride) for e in row] for row in right], "x")
    prod = pm_mul(L, R)
    return [[kronecker_unpack(e, stride) for e in row] for row in prod.entries]


def sim_trunc_products(
    f: Poly, h: BiPoly, eta: Sequence[BiPoly], m: int, n: int, delta: int
) -> list[BiPoly]:
    """R_j = [x^(n-delta) h eta_j rem f]_0^(m-1) for every eta_j.

    h lives in K[x,y]_{<(delta, mu_hat)} and each eta_j in K[x,y]_{<(delta, mu)}.
    The quotients of the Euclidean divisions are only needed modulo x^m, and
    those windows come out of two block matrix products.
    """
    if int(f.degree) != n or not 1 <= delta <= n or m < 1:
        raise BadParameters(f"bad parameters n={n}, delta={delta}, m={m}")
    if h.x_degree() >= delta or any(e.x_degree() >= delta for e in eta):
        raise BadParameters(f"inputs must have x-degree < {delta}")
    field = f.field
    f = _monic(f)
    mu = max((e.ybound for e in eta), default=1)
    mu_hat = h.ybound
    out_y = mu + mu_hat - 1
    if not eta:
        return []
    if h.is_zero:
        return [BiPoly.zero(field, m, out_y) for _ in eta]

    h = h.with_bounds(delta, mu_hat) if h.xbound != delta else h
    eta = [e.with_bounds(delta, mu) for e in eta]
    nblocks = -(-mu_hat // mu)
    h_blocks = [
        BiPoly(field, [list(r[i * mu : (i + 1) * mu]) for r in h.rows], delta, mu) for i in range(nblocks)
    ]
    # [H_i]_0^(m-1) with H_i = x^(n-delta) h_i
    H_low = [hb.shift_x(n - delta).truncate_x(m) for hb in h_blocks]
    eta_low = [x_slice(e, 0, m - 1) for e in eta]
    f_low = BiPoly.from_x_poly(f.truncate(m), m)

    w = min(m, delta - 1)
    if w >= 1:
        e0 = delta - 1 - w
        K = -(-e0 // w)
        c = K * w - e0
        f_rev_inv = BiPoly.from_x_poly(series_inv(f.reverse(n), delta - 1))
        gammas = []
        for e in eta:
            g = bi_mul(_x_reverse(e, delta - 1), f_rev_inv, xtrunc=delta - 1)
            gammas.append(g.shift_x(c))
        nb = -(-(delta + c) // w) + 1
        H_rev_blocks = [_x_blocks(_x_reverse(hb, delta - 1), w, nb) for hb in h_blocks]
        G_blocks = [_x_blocks(g, w, nb) for g in gammas]
        zero = BiPoly.zero(field, w, mu)

        def gamma_block(j: int, idx: int) -> BiPoly:
            return G_blocks[j][idx] if 0 <= idx < nb else zero

        left = [[H_rev_blocks[i][s] for s in range(K + 1)] for i in range(nblocks)]
        right_lo = [[gamma_block(j, K - s) for j in range(len(eta))] for s in range(K + 1)]
        right_hi = [[gamma_block(j, K - 1 - s) for j in range(len(eta))] for s in range(K + 1)]
        stride = 2 * mu - 1
        prod_lo = _block_product(field, left, right_lo, stride)
        prod_hi = _block_product(field, left, right_hi, stride)
    else:
        prod_lo = prod_hi = None

    results = []
    for j in range(len(eta)):
        acc = BiPoly.zero(field, m, out_y)
        for i in range(nblocks):
            direct = bi_mul(H_low[i], eta_low[j], xtrunc=m)
            if prod_lo is not None:
                window = x_slice(prod_lo[i][j], 0, w - 1) + x_slice(prod_hi[i][j], w, w - 1)
                q_low = _x_reverse(window.with_bounds(w, window.ybound), w - 1)
                direct = direct - bi_mul(q_low, f_low, xtrunc=m)
            rows = [[0] * (i * mu) + list(r) for r in direct.truncate_x(m).rows]
            acc = acc + BiPoly(field, rows, m, max(out_y, i * mu + direct.ybound))
        results.append(acc.with_bounds(m, out_y))
    return results


# === TRUNCATED POWERS ===


@dataclass(frozen=True)
class GenSeries:
    """Pieces of D(y) = b / (1 - a y) over K[x]/(f) gathered while computing truncated powers.

    d0 holds the full coefficients c_k = b a^k rem f for k < 3 mu - 2, d1_high and
    d1_low the slices [D_1]_(n-delta)^(delta-1) and [D_1]_0^(m-1) of the first
    mu^2 + mu - 1 coefficients, d2_low the slices [c_k]_0^(m-1) for k < d.
    """

    mu: int
    m: int
    delta: int
    d0: tuple[Poly, ...]
    d1_high: BiPoly | None
    d1_low: BiPoly | None
    d2_low: tuple[Poly, ...]


def build_generating_series(
    f: Poly,
    a: Poly,
    b: Poly,
    m: int,
    d: int,
    mu: int,
    A: Sequence[BiPoly],
    B: Sequence[BiPoly],
    tables_checked: bool = False,
) -> GenSeries:
    n = int(f.degree)
    if n < 1 or m < 1 or d < 0:
        raise BadParameters(f"bad parameters n={n}, m={m}, d={d}")
    if not 1 <= mu <= n or d > mu**3:
        raise BadParameters(f"need d^(1/3) <= mu <= n (d={d}, mu={mu}, n={n})")
    delta = check_power_tables(f, a, mu, A, B, spot_check=not tables_checked)
    field = f.field
    a, b = a % f, b % f

    # 1: D_0
    len0 = 3 * mu - 2
    d0 = [b]
    for _ in range(1, min(len0, max(d, 1))):
        d0.append((d0[-1] * a) % f)
    if d <= len0:
        logger.debug(f"truncated powers: d={d} served from D_0")
        return GenSeries(mu, m, delta, tuple(d0), None, None, tuple(c.truncate(m) for c in d0[:d]))
    len1 = mu * mu + mu - 1

    D0 = BiPoly.from_y_coeffs(field, d0, n)
    alphas = [y_reverse(A[j], mu - 1) for j in range(1, mu)]
    betas = [y_reverse(B[j], mu - 1) for j in range(1, mu)]
    high0 = x_slice(D0, n - delta, delta - 1)

    # 2: high part of D_1
    high: dict[int, Poly] = {k: high0.y_coeff(k) for k in range(len0)}
    direct = 2 * delta > n + 1
    P_high = None if direct else x_slice(D0, n - 2 * delta + 1, 2 * delta - 2)
    for j, alpha in enumerate(alphas, start=1):
        if direct:
            part = x_slice(ring_mul_mod(D0, alpha, f, len0), n - delta, delta - 1)
        else:
            part = high_part_rem(P_high, alpha, f, delta, delta, ytrunc=len0)
        for k in range(mu - 1, len0):
            idx = j * mu + k - (mu - 1)
            if idx < len1 and idx not in high:
                high[idx] = part.y_coeff(k)
    D1_high = BiPoly.from_y_coeffs(field, [high[k] for k in range(len1)], delta)

    # 3: low parts of D_1, then of D_2
    low_width = min(m, n - delta)
    low: dict[int, Poly] = {k: d0[k].truncate(m) for k in range(len0)}
    low0 = x_slice(D0, 0, low_width - 1)
    sims = sim_trunc_products(f, high0, alphas, m, n, delta)
    for j, alpha in enumerate(alphas, start=1):
        prod = bi_mul(low0, x_slice(alpha, 0, m - 1), xtrunc=m) + sims[j - 1]
        for k in range(mu - 1, len0):
            idx = j * mu + k - (mu - 1)
            if idx < len1 and idx not in low:
                low[idx] = prod.y_coeff(k).truncate(m)
    D1_low = BiPoly.from_y_coeffs(field, [low[k] for k in range(len1)], m)

    out: list[Poly | None] = [None] * d
    for k in range(min(len1, d)):
        out[k] = low[k]
    low1 = x_slice(D1_low, 0, low_width - 1)
    sims = sim_trunc_products(f, D1_high, betas, m, n, delta)
    for j, beta in enumerate(betas, start=1):
        prod = bi_mul(low1, x_slice(beta, 0, m - 1), xtrunc=m) + sims[j - 1]
        for k in range(mu - 1, len1):
            idx = j * mu * mu + k - (mu - 1)
            if idx < d and out[idx] is None:
                out[idx] = prod.y_coeff(k).truncate(m)

    logger.debug(f"truncated powers: n={n} m={m} d={d} mu={mu} delta={delta}")
    return GenSeries(mu, m, delta, tuple(d0), D1_high, D1_low, tuple(out))


def truncated_powers(
    f: Poly,
    a: Poly,
    b: Poly,
    m: int,
    d: int,
    mu: int,
    A: Sequence[BiPoly],
    B: Sequence[BiPoly],
    tables_checked: bool = False,
) -> list[Poly]:
    """[b a^k rem f]_0^(m-1) for 0 <= k < d.

    ``tables_checked`` skips the A/B spot check when the caller already ran it.
    """
    return list(build_generating_series(f, a, b, m, d, mu, A, B, tables_checked).d2_low)


# === SHIFTED TRUNCATIONS ===


def recover_shifted_truncations(f: Poly, rows: Sequence[Poly], m: int) -> TruncatedPowerTable:
    """From rows[k] = [x^(m-1) u_k rem f]_0^(2m-2), the table [x^i u_k rem f]_0^(m-1), i < m.

    Uses x^(i-1) u rem f = (v - (v(0)/f(0)) f) / x with v = x^i u rem f.
    """
    if f.coeff(0) == 0:
        raise NeedsUnitConstantTerm("descending recurrence needs f(0) != 0")
    p = f.field.p
    f0_inv = f.field.inv(f.coeff(0))
    fc = f.padded(2 * m - 1)
    table: list[list[Poly]] = [[] for _ in range(m)]
    for row in rows:
        v = row.padded(2 * m - 1)
        table[m - 1].append(Poly(f.field, v[:m]))
        for i in range(m - 2, -1, -1):
            lam = v[0] * f0_inv % p
            v = [(v[k] - lam * fc[k]) % p for k in range(1, len(v))]
            table[i].append(Poly(f.field, v[:m]))
    return TruncatedPowerTable(m, len(rows), tuple(tuple(r) for r in table))
