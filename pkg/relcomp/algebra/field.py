"""Prime field arithmetic and the number-theoretic transform."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import isprime, primefactors
from sympy.ntheory import primitive_root

from relcomp.algebra.errors import (
    BadParameters,
    DivisionByZero,
    FieldMismatch,
    UnsupportedTransformSize,
)

logger = logging.getLogger(__name__)

GOLDILOCKS = 2**64 - 2**32 + 1
NTT_PRIME = 998244353
# Below this bound a product of two residues fits in int64.
WORD_PRIME_LIMIT = 1 << 31


@lru_cache(maxsize=256)
def _root_of_unity(p: int, generator: int, order: int, inverse: bool) -> int:
    w = pow(generator, (p - 1) // order, p)
    return pow(w, p - 2, p) if inverse else w


@lru_cache(maxsize=64)
def _bit_reversal(size: int) -> np.ndarray:
    bits = size.bit_length() - 1
    idx = np.arange(size, dtype=np.int64)
    rev = np.zeros(size, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=256)
def _twiddles(p: int, generator: int, length: int, inverse: bool) -> np.ndarray:
    w = _root_of_unity(p, generator, length, inverse)
    half = length >> 1
    tw = [1] * half
    for k in range(1, half):
        tw[k] = tw[k - 1] * w % p
    arr = np.array(tw, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) for an odd word-sized prime p.

    The two-adicity and the primitive root are derived at construction;
    equality and hashing only look at p.
    """

    p: int
    two_adicity: int = field(init=False, compare=False)
    generator: int = field(init=False, compare=False)

    def __post_init__(self):
        p = self.p
        if p < 3 or not isprime(p):
            raise BadParameters(f"{p} is not an odd prime")
        if p.bit_length() > 64:
            raise BadParameters(f"{p} does not fit in a machine word")

        q, k = p - 1, 0
        while q % 2 == 0:
            q //= 2
            k += 1
        g = int(primitive_root(p))
        for factor in primefactors(p - 1):
            if pow(g, (p - 1) // factor, p) == 1:
                raise BadParameters(f"{g} is not a generator of GF({p})*")
        object.__setattr__(self, "two_adicity", k)
        object.__setattr__(self, "generator", g)

    # --- scalar arithmetic on raw residues ---

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def neg(self, x: int) -> int:
        return -x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise DivisionByZero(f"inverse of zero in GF({self.p})")
        return pow(x, -1, self.p)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(x), -e, self.p)
        return pow(x, e, self.p)

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    # --- transforms ---

    def max_transform_size(self) -> int:
        return 1 << self.two_adicity

    def supports_transform(self, size: int) -> bool:
        return size > 0 and size & (size - 1) == 0 and size <= self.max_transform_size()

    @property
    def vectorized(self) -> bool:
        return self.p < WORD_PRIME_LIMIT

    def _check_size(self, size: int):
        if not self.supports_transform(size):
            raise UnsupportedTransformSize(
                f"size {size} is not a power of two dividing 2^{self.two_adicity}"
            )

    def ntt_array(self, values: np.ndarray, inverse: bool = False) -> np.ndarray:
        """Vectorized transform of reduced int64 residues; needs p < 2^31."""
        size = values.shape[0]
        self._check_size(size)
        if not self.vectorized:
            raise UnsupportedTransformSize(f"GF({self.p}) residues overflow int64 products")
        p = self.p
        a = values[_bit_reversal(size)]
        length = 2
        while length <= size:
            half = length >> 1
            blocks = a.reshape(-1, length)
            u = blocks[:, :half]
            v = blocks[:, half:] * _twiddles(p, self.generator, length, inverse) % p
            a = np.concatenate(((u + v) % p, (u - v) % p), axis=1).reshape(-1)
            length <<= 1
        if inverse:
            a = a * pow(size, p - 2, p) % p
        return a

    def ntt(self, values: Sequence[int], inverse: bool = False) -> list[int]:
        """Evaluates at the powers of a primitive len(values)-th root (or inverts that map)."""
        size = len(values)
        self._check_size(size)
        p = self.p
        if self.vectorized:
            arr = np.fromiter((v % p for v in values), dtype=np.int64, count=size)
            return self.ntt_array(arr, inverse).tolist()
        a = [v % p for v in values]

        j = 0
        for i in range(1, size):
            bit = size >> 1
            while j & bit:
                j ^= bit
                bit >>= 1
            j |= bit
            if i < j:
                a[i], a[j] = a[j], a[i]

        length = 2
        while length <= size:
            w_len = _root_of_unity(p, self.generator, length, inverse)
            half = length >> 1
            twiddles = [1] * half
            for k in range(1, half):
                twiddles[k] = twiddles[k - 1] * w_len % p
            for start in range(0, size, length):
                for k in range(half):
                    u = a[start + k]
                    v = a[start + k + half] * twiddles[k] % p
                    a[start + k] = (u + v) % p
                    a[start + k + half] = (u - v) % p
            length <<= 1

        if inverse:
            size_inv = pow(size, p - 2, p)
            a = [x * size_inv % p for x in a]
        return a


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            object.__setattr__(self, "value", self.value % self.field.p)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"GF({self.field.p}) vs GF({other.field.p})")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, value: int) -> FieldElement:
        return FieldElement(value, self.field)

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __truediv__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.mul(self.value, self.field.inv(v)))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def ntt(coeffs: Sequence[FieldElement], size: int, inverse: bool = False) -> list[FieldElement]:
    """Transform of a sequence of field elements of exactly ``size`` entries."""
    if not coeffs:
        raise UnsupportedTransformSize("empty input")
    spec = coeffs[0].field
    if len(coeffs) != size:
        raise UnsupportedTransformSize(f"input length {len(coeffs)} differs from size {size}")
    out = spec.ntt([c.value for c in coeffs], inverse=inverse)
    return [FieldElement(v, spec) for v in out]


@lru_cache(maxsize=32)
def get_field(p: int) -> FieldSpec:
    """Returns a cached FieldSpec for p."""
    spec = FieldSpec(p)
    logger.debug(f"GF({p}): two-adicity {spec.two_adicity}, generator {spec.generator}")
    return spec
