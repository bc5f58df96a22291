"""Dense univariate polynomials over GF(p)."""
from __future__ import annotations

import logging
import math
import os
from typing import Iterable, Sequence

import numpy as np

from relcomp.algebra.errors import (
    DegreeOverflow,
    DivisionByZero,
    DuplicateAbscissa,
    FieldMismatch,
    NotAUnit,
    NotInvertibleModF,
)
from relcomp.algebra.field import FieldElement, FieldSpec

logger = logging.getLogger(__name__)

# Degree of the zero polynomial. Compares below every integer degree.
DEG_ZERO = -math.inf

MUL_THRESHOLD = int(os.getenv("RELCOMP_MUL_THRESHOLD", "32"))
LAGRANGE_THRESHOLD = 16
# Schoolbook products with fewer terms stay in plain Python.
SMALL_PRODUCT = 512


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _as_array(values: Sequence[int], p: int, length: int | None = None) -> np.ndarray:
    arr = np.zeros(len(values) if length is None else length, dtype=np.int64)
    arr[: len(values)] = [v % p for v in values]
    return arr


def _convolve_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    # 16-bit limbs keep every partial sum inside int64
    x0, x1 = x & 0xFFFF, x >> 16
    y0, y1 = y & 0xFFFF, y >> 16
    lo = np.convolve(x0, y0) % p
    mid = (np.convolve(x0, y1) + np.convolve(x1, y0)) % p
    hi = np.convolve(x1, y1) % p
    return (lo + mid * (1 << 16) % p + hi * ((1 << 32) % p) % p) % p


def mul_lists(a: Sequence[int], b: Sequence[int], spec: FieldSpec) -> list[int]:
    """Raw product of coefficient lists; output has len(a)+len(b)-1 entries."""
    if not a or not b:
        return []
    p = spec.p
    la, lb = len(a), len(b)
    out_len = la + lb - 1
    size = 1 << (out_len - 1).bit_length()
    if min(la, lb) <= MUL_THRESHOLD or not spec.supports_transform(size):
        if spec.vectorized and la * lb > SMALL_PRODUCT:
            return _convolve_mod(_as_array(a, p), _as_array(b, p), p).tolist()
        out = [0] * out_len
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return [c % p for c in out]

    if spec.vectorized:
        fa = spec.ntt_array(_as_array(a, p, size))
        fb = spec.ntt_array(_as_array(b, p, size))
        return spec.ntt_array(fa * fb % p, inverse=True)[:out_len].tolist()

    fa = spec.ntt(list(a) + [0] * (size - la))
    fb = spec.ntt(list(b) + [0] * (size - lb))
    prod = spec.ntt([x * y % p for x, y in zip(fa, fb)], inverse=True)
    return prod[:out_len]


def series_inv_list(u: Sequence[int], k: int, spec: FieldSpec) -> list[int]:
    if k <= 0:
        return []
    if not u or u[0] % spec.p == 0:
        raise NotAUnit("series inverse needs a nonzero constant term")
    p = spec.p
    g = [spec.inv(u[0])]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        ug = mul_lists(u[:prec], g, spec)[:prec]
        ug += [0] * (prec - len(ug))
        e = [-c % p for c in ug]
        e[0] = (e[0] + 2) % p
        g = mul_lists(g, e, spec)[:prec]
    return g + [0] * (k - len(g))


def _divrem_lists(u: list[int], f: list[int], spec: FieldSpec) -> tuple[list[int], list[int]]:
    p = spec.p
    lf = len(f)
    k = len(u) - lf + 1
    if k <= 0:
        return [], list(u)

    if (k <= MUL_THRESHOLD or lf <= MUL_THRESHOLD) and spec.vectorized and k * lf > SMALL_PRODUCT:
        r_arr = _as_array(u, p)
        f_arr = _as_array(f, p)
        inv_lc = spec.inv(f[-1])
        q = [0] * k
        for i in range(k - 1, -1, -1):
            c = int(r_arr[i + lf - 1]) * inv_lc % p
            q[i] = c
            if c:
                r_arr[i : i + lf] = (r_arr[i : i + lf] - c * f_arr) % p
        return q, r_arr[: lf - 1].tolist()

    if k <= MUL_THRESHOLD or lf <= MUL_THRESHOLD:
        r = list(u)
        inv_lc = spec.inv(f[-1])
        q = [0] * k
        for i in range(k - 1, -1, -1):
            c = r[i + lf - 1] * inv_lc % p
            q[i] = c
            if c:
                for j in range(lf):
                    r[i + j] = (r[i + j] - c * f[j]) % p
        return q, r[: lf - 1]

    rev_u = u[::-1][:k]
    rev_f = f[::-1][:k]
    q_rev = mul_lists(rev_u, series_inv_list(rev_f, k, spec), spec)[:k]
    q_rev += [0] * (k - len(q_rev))
    q = q_rev[::-1]
    qf = mul_lists(q, f, spec)
    r = [(u[i] - qf[i]) % p for i in range(lf - 1)]
    return q, r


class Poly:
    """Immutable dense polynomial, coefficients low-to-high as residues in [0, p)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        p = field.p
        self.field = field
        self.coeffs = tuple(_trim([int(c) % p for c in coeffs]))

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs: list[int]) -> Poly:
        # coeffs already reduced; only trimming is needed
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(_trim(coeffs))
        return obj

    @classmethod
    def zero(cls, field: FieldSpec) -> Poly:
        return cls._raw(field, [])

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> Poly:
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: FieldSpec, k: int, c: int = 1) -> Poly:
        return cls(field, [0] * k + [c])

    # --- inspection ---

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def padded(self, length: int) -> list[int]:
        """Coefficients 0..length-1 with zeros past the degree."""
        c = list(self.coeffs[:length])
        return c + [0] * (length - len(c))

    def valuation(self) -> int | float:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return math.inf

    def _check(self, other: Poly):
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.p}) vs GF({other.field.p})")

    # --- arithmetic ---

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        p = self.field.p
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Poly._raw(self.field, out)

    def __neg__(self) -> Poly:
        p = self.field.p
        return Poly._raw(self.field, [-c % p for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return Poly._raw(self.field, mul_lists(self.coeffs, other.coeffs, self.field))

    def __rmul__(self, other) -> Poly:
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: int) -> Poly:
        p = self.field.p
        c %= p
        if c == 0:
            return Poly.zero(self.field)
        return Poly._raw(self.field, [x * c % p for x in self.coeffs])

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        return poly_divrem(self, other)

    def __mod__(self, other: Poly) -> Poly:
        return poly_divrem(self, other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return poly_divrem(self, other)[0]

    def __call__(self, x: int) -> int:
        p = self.field.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return f"Poly({' + '.join(terms)} mod {self.field.p})"

    # --- structural helpers ---

    def shift(self, k: int) -> Poly:
        """Multiplication by x^k."""
        if not self.coeffs:
            return self
        return Poly._raw(self.field, [0] * k + list(self.coeffs))

    def truncate(self, k: int) -> Poly:
        """Remainder modulo x^k."""
        return Poly._raw(self.field, list(self.coeffs[: max(k, 0)]))

    def slice(self, start: int, k: int) -> Poly:
        return poly_slice(self, start, k)

    def reverse(self, k: int) -> Poly:
        return poly_reverse(self, k)

    def derivative(self) -> Poly:
        p = self.field.p
        return Poly._raw(self.field, [i * c % p for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc))


def _same_field(*polys: Poly) -> FieldSpec:
    spec = polys[0].field
    for q in polys[1:]:
        if q.field != spec:
            raise FieldMismatch(f"GF({spec.p}) vs GF({q.field.p})")
    return spec


def poly_mul(u: Poly, v: Poly) -> Poly:
    return u * v


def poly_divrem(u: Poly, f: Poly) -> tuple[Poly, Poly]:
    """Euclidean division u = q*f + r with deg r < deg f."""
    spec = _same_field(u, f)
    if f.is_zero:
        raise DivisionByZero("division by the zero polynomial")
    if u.degree < f.degree:
        return Poly.zero(spec), u
    q, r = _divrem_lists(list(u.coeffs), list(f.coeffs), spec)
    return Poly._raw(spec, q), Poly._raw(spec, r)


def mul_trunc(u: Poly, v: Poly, k: int) -> Poly:
    """Product modulo x^k."""
    spec = _same_field(u, v)
    return Poly._raw(spec, mul_lists(u.coeffs[:k], v.coeffs[:k], spec)[: max(k, 0)])


def series_inv(u: Poly, k: int) -> Poly:
    """Inverse of u modulo x^k by Newton iteration."""
    return Poly._raw(u.field, series_inv_list(u.coeffs, k, u.field))


def poly_slice(u: Poly, start: int, k: int) -> Poly:
    """[u]_start^k = u_start + u_{start+1} x + ... + u_{start+k} x^k."""
    if start < 0:
        raise ValueError("slice start must be non-negative")
    if k < 0:
        return Poly.zero(u.field)
    return Poly._raw(u.field, list(u.coeffs[start : start + k + 1]))


def poly_reverse(u: Poly, k: int) -> Poly:
    """x^k u(1/x); requires deg u <= k."""
    if u.degree > k:
        raise DegreeOverflow(f"degree {u.degree} exceeds reversal bound {k}")
    if k < 0:
        return Poly.zero(u.field)
    return Poly._raw(u.field, u.padded(k + 1)[::-1])


def powmod(a: Poly, e: int, f: Poly) -> Poly:
    """a^e rem f by square-and-multiply."""
    spec = _same_field(a, f)
    if f.is_zero:
        raise DivisionByZero("powmod modulo the zero polynomial")
    if e < 0:
        raise ValueError("negative exponent")
    result = Poly.constant(spec, 1) % f
    base = a % f
    while e:
        if e & 1:
            result = (result * base) % f
        e >>= 1
        if e:
            base = (base * base) % f
    return result


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Returns (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    spec = _same_field(a, b)
    r0, r1 = a, b
    s0, s1 = Poly.constant(spec, 1), Poly.zero(spec)
    t0, t1 = Poly.zero(spec), Poly.constant(spec, 1)
    while not r1.is_zero:
        q, r = poly_divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = spec.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    return poly_xgcd(a, b)[0]


def poly_inv_mod(a: Poly, f: Poly) -> Poly:
    """Inverse of a modulo f by the extended Euclidean algorithm."""
    if f.is_zero:
        raise DivisionByZero("inverse modulo the zero polynomial")
    g, s, _ = poly_xgcd(a % f, f)
    if g.degree != 0:
        raise NotInvertibleModF(g)
    return s % f


# --- multipoint evaluation and interpolation ---


def subproduct_tree(points: Sequence[int], spec: FieldSpec) -> list[list[Poly]]:
    """Levels of the subproduct tree, leaves (x - x_i) first, root last."""
    p = spec.p
    level = [Poly(spec, [-x % p, 1]) for x in points]
    tree = [level]
    while len(level) > 1:
        level = [
            level[i] * level[i + 1] if i + 1 < len(level) else level[i]
            for i in range(0, len(level), 2)
        ]
        tree.append(level)
    return tree


def _remainders_down(u: Poly, tree: list[list[Poly]]) -> list[int]:
    rems = [u % tree[-1][0]]
    for depth in range(len(tree) - 2, -1, -1):
        rems = [rems[i // 2] % node for i, node in enumerate(tree[depth])]
    return [r.coeff(0) for r in rems]


def _as_ints(values: Sequence[int | FieldElement]) -> list[int]:
    return [v.value if isinstance(v, FieldElement) else int(v) for v in values]


def multipoint_eval(u: Poly, points: Sequence[int | FieldElement]) -> list[int]:
    xs = [x % u.field.p for x in _as_ints(points)]
    if not xs:
        return []
    if len(xs) <= LAGRANGE_THRESHOLD:
        return [u(x) for x in xs]
    return _remainders_down(u, subproduct_tree(xs, u.field))


def interpolate(
    spec: FieldSpec, points: Sequence[int | FieldElement], values: Sequence[int | FieldElement]
) -> Poly:
    """Unique polynomial of degree < len(points) through the given pairs."""
    p = spec.p
    xs = [x % p for x in _as_ints(points)]
    ys = [y % p for y in _as_ints(values)]
    if len(xs) != len(ys):
        raise ValueError("points and values differ in length")
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation points must be pairwise distinct")
    if not xs:
        return Poly.zero(spec)

    if len(xs) <= LAGRANGE_THRESHOLD:
        master = Poly.constant(spec, 1)
        for x in xs:
            master = master * Poly(spec, [-x, 1])
        result = Poly.zero(spec)
        for xi, yi in zip(xs, ys):
            basis, _ = poly_divrem(master, Poly(spec, [-xi, 1]))
            denom = basis(xi)
            result = result + basis.scale(yi * spec.inv(denom))
        return result

    tree = subproduct_tree(xs, spec)
    weights = _remainders_down(tree[-1][0].derivative(), tree)
    level = [Poly.constant(spec, y * spec.inv(w)) for y, w in zip(ys, weights)]
    for depth in range(len(tree) - 1):
        nodes = tree[depth]
        merged = []
        for i in range(0, len(level), 2):
            if i + 1 < len(level):
                merged.append(level[i] * nodes[i + 1] + level[i + 1] * nodes[i])
            else:
                merged.append(level[i])
        level = merged
    return level[0]
