"""Dense bivariate polynomials with explicit bidegree bounds.

Storage is x-major: ``rows[i][j]`` is the coefficient of x^i y^j. Products go
through a Kronecker packing x^i y^j -> z^(i*stride + j) so that every
bivariate product is one univariate product.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from relcomp.algebra.errors import BlockTooSmall, DegreeOverflow, DivisionByZero, FieldMismatch
from relcomp.algebra.field import FieldSpec
from relcomp.algebra.upoly import Poly, mul_lists

logger = logging.getLogger(__name__)


class BiPoly:
    __slots__ = ("field", "rows", "xbound", "ybound")

    def __init__(
        self,
        field: FieldSpec,
        grid: Sequence[Sequence[int]] = (),
        xbound: int | None = None,
        ybound: int | None = None,
    ):
        p = field.p
        if xbound is None:
            xbound = len(grid)
        if ybound is None:
            ybound = max((len(r) for r in grid), default=0)
        rows = []
        for i, row in enumerate(grid):
            clean = [int(c) % p for c in row]
            if any(clean[ybound:]) or (i >= xbound and any(clean)):
                raise DegreeOverflow(f"coefficient outside bounds ({xbound}, {ybound})")
            if i < xbound:
                clean = clean[:ybound]
                rows.append(tuple(clean + [0] * (ybound - len(clean))))
        rows.extend([(0,) * ybound] * (xbound - len(rows)))
        self.field = field
        self.rows = tuple(rows)
        self.xbound = xbound
        self.ybound = ybound

    @classmethod
    def _raw(cls, field: FieldSpec, rows: list[list[int]], xbound: int, ybound: int) -> BiPoly:
        # rows reduced mod p, exactly xbound rows of ybound entries
        obj = cls.__new__(cls)
        obj.field = field
        obj.rows = tuple(tuple(r) for r in rows)
        obj.xbound = xbound
        obj.ybound = ybound
        return obj

    @classmethod
    def zero(cls, field: FieldSpec, xbound: int = 0, ybound: int = 0) -> BiPoly:
        return cls._raw(field, [[0] * ybound for _ in range(xbound)], xbound, ybound)

    @classmethod
    def from_x_poly(cls, u: Poly, xbound: int | None = None) -> BiPoly:
        """u(x) seen as a polynomial free of y."""
        xb = len(u.coeffs) if xbound is None else xbound
        return cls(u.field, [[c] for c in u.coeffs], xb, 1)

    @classmethod
    def from_y_poly(cls, u: Poly, ybound: int | None = None) -> BiPoly:
        """u(y) seen as a polynomial free of x."""
        yb = len(u.coeffs) if ybound is None else ybound
        return cls(u.field, [list(u.coeffs)], 1, yb)

    @classmethod
    def from_y_coeffs(cls, field: FieldSpec, coeffs: Sequence[Poly], xbound: int) -> BiPoly:
        """Builds sum_j coeffs[j](x) y^j."""
        ybound = len(coeffs)
        rows = [[0] * ybound for _ in range(xbound)]
        for j, c in enumerate(coeffs):
            if c.degree >= xbound:
                raise DegreeOverflow(f"x-degree {c.degree} exceeds bound {xbound}")
            for i, v in enumerate(c.coeffs):
                rows[i][j] = v
        return cls._raw(field, rows, xbound, ybound)

    @classmethod
    def from_x_coeffs(cls, field: FieldSpec, coeffs: Sequence[Poly], ybound: int) -> BiPoly:
        """Builds sum_i x^i coeffs[i](y)."""
        return cls(field, [c.coeffs for c in coeffs], len(coeffs), ybound)

    # --- views ---

    def coeff(self, i: int, j: int) -> int:
        if 0 <= i < self.xbound and 0 <= j < self.ybound:
            return self.rows[i][j]
        return 0

    def x_coeff(self, i: int) -> Poly:
        """Coefficient of x^i, a polynomial in y."""
        if 0 <= i < self.xbound:
            return Poly._raw(self.field, list(self.rows[i]))
        return Poly.zero(self.field)

    def y_coeff(self, j: int) -> Poly:
        """Coefficient of y^j, a polynomial in x."""
        if 0 <= j < self.ybound:
            return Poly._raw(self.field, [r[j] for r in self.rows])
        return Poly.zero(self.field)

    def y_coeffs(self) -> list[Poly]:
        return [self.y_coeff(j) for j in range(self.ybound)]

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def x_degree(self) -> int:
        for i in range(self.xbound - 1, -1, -1):
            if any(self.rows[i]):
                return i
        return -1

    def y_degree(self) -> int:
        best = -1
        for r in self.rows:
            for j in range(self.ybound - 1, best, -1):
                if r[j]:
                    best = j
                    break
        return best

    def with_bounds(self, xbound: int, ybound: int) -> BiPoly:
        """Same polynomial with new capacity; fails if a nonzero term would be cut."""
        if self.x_degree() >= xbound or self.y_degree() >= ybound:
            raise DegreeOverflow(f"bidegree does not fit in ({xbound}, {ybound})")
        rows = [list(r[:ybound]) + [0] * (ybound - self.ybound) for r in self.rows[:xbound]]
        rows.extend([[0] * ybound for _ in range(xbound - len(rows))])
        return BiPoly._raw(self.field, rows, xbound, ybound)

    def trimmed(self) -> BiPoly:
        return self.with_bounds(self.x_degree() + 1, self.y_degree() + 1)

    def truncate_x(self, k: int) -> BiPoly:
        """Remainder modulo x^k (capacity becomes k)."""
        rows = [list(r) for r in self.rows[:k]]
        rows.extend([[0] * self.ybound for _ in range(k - len(rows))])
        return BiPoly._raw(self.field, rows, k, self.ybound)

    def truncate_y(self, k: int) -> BiPoly:
        """Remainder modulo y^k (capacity becomes k)."""
        rows = [list(r[:k]) + [0] * (k - self.ybound) for r in self.rows]
        return BiPoly._raw(self.field, rows, self.xbound, k)

    def shift_x(self, k: int) -> BiPoly:
        """Multiplication by x^k."""
        rows = [[0] * self.ybound for _ in range(k)] + [list(r) for r in self.rows]
        return BiPoly._raw(self.field, rows, self.xbound + k, self.ybound)

    # --- arithmetic ---

    def _check(self, other: BiPoly):
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.p}) vs GF({other.field.p})")

    def __add__(self, other: BiPoly) -> BiPoly:
        self._check(other)
        p = self.field.p
        xb, yb = max(self.xbound, other.xbound), max(self.ybound, other.ybound)
        rows = [[0] * yb for _ in range(xb)]
        for src in (self, other):
            for i, r in enumerate(src.rows):
                row = rows[i]
                for j, c in enumerate(r):
                    if c:
                        row[j] = (row[j] + c) % p
        return BiPoly._raw(self.field, rows, xb, yb)

    def __neg__(self) -> BiPoly:
        p = self.field.p
        return BiPoly._raw(
            self.field, [[-c % p for c in r] for r in self.rows], self.xbound, self.ybound
        )

    def __sub__(self, other: BiPoly) -> BiPoly:
        return self + (-other)

    def __mul__(self, other: BiPoly) -> BiPoly:
        return bi_mul(self, other)

    def scale(self, c: int) -> BiPoly:
        p = self.field.p
        return BiPoly._raw(
            self.field, [[v * c % p for v in r] for r in self.rows], self.xbound, self.ybound
        )

    def __call__(self, x: int, y: int) -> int:
        p = self.field.p
        acc = 0
        for r in reversed(self.rows):
            inner = 0
            for c in reversed(r):
                inner = (inner * y + c) % p
            acc = (acc * x + inner) % p
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        if self.field != other.field:
            return False
        xb, yb = max(self.xbound, other.xbound), max(self.ybound, other.ybound)
        return all(self.coeff(i, j) == other.coeff(i, j) for i in range(xb) for j in range(yb))

    def __hash__(self):
        t = self.trimmed()
        return hash((self.field.p, t.rows))

    def __repr__(self):
        terms = [
            f"{c}*x^{i}*y^{j}" for i, r in enumerate(self.rows) for j, c in enumerate(r) if c
        ]
        body = " + ".join(terms) if terms else "0"
        return f"BiPoly({body}; <({self.xbound},{self.ybound}) mod {self.field.p})"


# --- Kronecker packing ---


def kronecker_pack(A: BiPoly, stride: int) -> Poly:
    if A.ybound > stride:
        raise DegreeOverflow(f"y-bound {A.ybound} exceeds packing stride {stride}")
    out = [0] * (A.xbound * stride)
    for i, r in enumerate(A.rows):
        base = i * stride
        for j, c in enumerate(r):
            out[base + j] = c
    return Poly._raw(A.field, out)


def kronecker_unpack(u: Poly, stride: int, xbound: int | None = None) -> BiPoly:
    c = u.coeffs
    xb = (len(c) + stride - 1) // stride if xbound is None else xbound
    rows = []
    for i in range(xb):
        chunk = list(c[i * stride : (i + 1) * stride])
        rows.append(chunk + [0] * (stride - len(chunk)))
    return BiPoly._raw(u.field, rows, xb, stride)


def bi_mul(A: BiPoly, B: BiPoly, xtrunc: int | None = None, ytrunc: int | None = None) -> BiPoly:
    """Product A*B, optionally reduced modulo x^xtrunc and y^ytrunc."""
    A._check(B)
    if xtrunc is not None:
        A, B = A.truncate_x(min(A.xbound, xtrunc)), B.truncate_x(min(B.xbound, xtrunc))
    if ytrunc is not None:
        A, B = A.truncate_y(min(A.ybound, ytrunc)), B.truncate_y(min(B.ybound, ytrunc))
    xb = A.xbound + B.xbound - 1
    yb = A.ybound + B.ybound - 1
    if xb <= 0 or yb <= 0:
        return BiPoly.zero(A.field, max(xb, 0), max(yb, 0))
    packed = mul_lists(kronecker_pack(A, yb).coeffs, kronecker_pack(B, yb).coeffs, A.field)
    prod = kronecker_unpack(Poly._raw(A.field, packed), yb, xb)
    if xtrunc is not None and xtrunc < prod.xbound:
        prod = prod.truncate_x(xtrunc)
    if ytrunc is not None and ytrunc < prod.ybound:
        prod = prod.truncate_y(ytrunc)
    return prod


def bi_rem(A: BiPoly, f: Poly) -> BiPoly:
    """Reduces every y-coefficient modulo f(x)."""
    if f.is_zero:
        raise DivisionByZero("reduction modulo the zero polynomial")
    n = len(f.coeffs) - 1
    if A.xbound <= n:
        return A
    return BiPoly.from_y_coeffs(A.field, [c % f for c in A.y_coeffs()], n)


def x_slice(A: BiPoly, start: int, k: int) -> BiPoly:
    """[A]_start^k applied to every y-coefficient; capacity k+1 in x."""
    if start < 0:
        raise ValueError("slice start must be non-negative")
    width = max(k + 1, 0)
    rows = [list(r) for r in A.rows[start : start + width]]
    rows.extend([[0] * A.ybound for _ in range(width - len(rows))])
    return BiPoly._raw(A.field, rows, width, A.ybound)


def y_reverse(A: BiPoly, at: int) -> BiPoly:
    """y^at A(x, 1/y)."""
    if A.y_degree() > at:
        raise DegreeOverflow(f"y-degree {A.y_degree()} exceeds reversal bound {at}")
    width = at + 1
    rows = []
    for r in A.rows:
        padded = list(r[:width]) + [0] * (width - min(len(r), width))
        rows.append(padded[::-1])
    return BiPoly._raw(A.field, rows, A.xbound, width)


def eval_y(A: BiPoly, t: Poly, f: Poly) -> Poly:
    """sum_j A_j(x) t^j rem f by Horner in y, reducing at each step."""
    if f.is_zero:
        raise DivisionByZero("evaluation modulo the zero polynomial")
    t = t % f
    acc = Poly.zero(A.field)
    for j in range(A.ybound - 1, -1, -1):
        acc = (acc * t + A.y_coeff(j)) % f
    return acc


# --- three-variable view used by bivariate composition ---


@dataclass(frozen=True)
class MultiPoly3:
    """Coefficients of x^a y0^i0 y1^i1 y2^i2, stored as blocks[i1][i2] in K[x, y0]."""

    field: FieldSpec
    xbound: int
    mu: int
    blocks: tuple[tuple[BiPoly, ...], ...]

    def block(self, i1: int, i2: int) -> BiPoly:
        return self.blocks[i1][i2]

    def coeff(self, a: int, i0: int, i1: int, i2: int) -> int:
        return self.blocks[i1][i2].coeff(a, i0)

    def substitute_powers(self) -> BiPoly:
        """Evaluates at (y0, y1, y2) = (y, y^mu, y^mu^2)."""
        mu = self.mu
        yb = mu**3
        rows = [[0] * yb for _ in range(self.xbound)]
        for i1 in range(mu):
            for i2 in range(mu):
                blk = self.blocks[i1][i2]
                offset = i1 * mu + i2 * mu * mu
                for a, r in enumerate(blk.rows):
                    for i0, c in enumerate(r):
                        if c:
                            rows[a][offset + i0] = c
        return BiPoly._raw(self.field, rows, self.xbound, yb)


def inverse_kronecker(G: BiPoly, mu: int) -> MultiPoly3:
    """Rewrites y^i with i = i0 + i1*mu + i2*mu^2 as y0^i0 y1^i1 y2^i2."""
    if mu < 1:
        raise BlockTooSmall("block size must be positive")
    if G.ybound > mu**3 and G.y_degree() >= mu**3:
        raise BlockTooSmall(f"y-bound {G.ybound} exceeds mu^3 = {mu ** 3}")
    blocks = []
    for i1 in range(mu):
        line = []
        for i2 in range(mu):
            offset = i1 * mu + i2 * mu * mu
            rows = [list(r[offset : offset + mu]) for r in G.rows]
            rows = [r + [0] * (mu - len(r)) for r in rows]
            line.append(BiPoly._raw(G.field, rows, G.xbound, mu))
        blocks.append(tuple(line))
    return MultiPoly3(G.field, G.xbound, mu, tuple(blocks))
