"""Benchmark instances: seeded generation and the plain-text instance format."""
import logging
from dataclasses import dataclass, field
from typing import Optional

from relcomp.algebra.bipoly import BiPoly
from relcomp.algebra.field import FieldSpec, get_field
from relcomp.algebra.upoly import Poly

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
INSTANCE_KEYS = ("p", "f", "a", "g")


class InstanceFormatError(ValueError):
    pass


class SplitMix64:
    """splitmix64 stream; field elements are drawn by rejection sampling."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound < 1:
            raise ValueError("bound must be positive")
        bits = max((bound - 1).bit_length(), 1)
        while True:
            v, have = 0, 0
            while have < bits:
                v = (v << 64) | self.next()
                have += 64
            v >>= have - bits
            if v < bound:
                return v

    def elements(self, p: int, count: int) -> list[int]:
        return [self.below(p) for _ in range(count)]


@dataclass
class Instance:
    """One benchmark input. Coefficient lists are low-to-high residues."""

    p: int
    f: list[int]
    a: list[int]
    g: list[int] = field(default_factory=list)
    seed: Optional[int] = None
    grid: Optional[list[list[int]]] = None
    points: Optional[list[tuple[int, int]]] = None
    params: dict = field(default_factory=dict)

    @property
    def spec(self) -> FieldSpec:
        return get_field(self.p)

    @property
    def n(self) -> int:
        return len(self.f) - 1

    def polys(self) -> tuple[Poly, Poly, Poly]:
        K = self.spec
        return Poly(K, self.f), Poly(K, self.a), Poly(K, self.g)

    def bivariate(self) -> BiPoly:
        return BiPoly(self.spec, self.grid or [])


# === GENERATION ===


def _modulus(rng: SplitMix64, p: int, n: int) -> list[int]:
    # monic of degree n, nonzero constant term
    coeffs = rng.elements(p, n) + [1]
    if coeffs[0] == 0:
        coeffs[0] = 1 + rng.below(p - 1)
    return coeffs


def random_instance(p: int, n: int, seed: int) -> Instance:
    """Monic f of degree n, a and g of degree < n."""
    if n < 1:
        raise ValueError("degree must be positive")
    rng = SplitMix64(seed)
    f = _modulus(rng, p, n)
    a = rng.elements(p, n)
    g = rng.elements(p, n)
    return Instance(p=p, f=f, a=a, g=g, seed=seed, params={"n": n})


def random_bivariate_instance(p: int, n: int, m: int, d: int, seed: int) -> Instance:
    """f, a as in random_instance and G with bidegree < (m, d)."""
    inst = random_instance(p, n, seed)
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    inst.grid = [rng.elements(p, d) for _ in range(m)]
    inst.g = []
    inst.params.update({"m": m, "d": d})
    return inst


def random_point_set(p: int, n: int, m: int, d: int, seed: int) -> Instance:
    """n points with distinct abscissae and G with bidegree < (m, d)."""
    if n > p:
        raise ValueError(f"cannot draw {n} distinct abscissae in GF({p})")
    rng = SplitMix64(seed)
    xs: list[int] = []
    seen = set()
    while len(xs) < n:
        x = rng.below(p)
        if x not in seen:
            seen.add(x)
            xs.append(x)
    points = [(x, rng.below(p)) for x in xs]
    grid = [rng.elements(p, d) for _ in range(m)]
    return Instance(p=p, f=[], a=[], seed=seed, grid=grid, points=points, params={"n": n, "m": m, "d": d})


# === TEXT FORMAT ===


def _parse_int(text: str, key: str) -> int:
    """
    Parses one decimal integer of an instance file.

    Args:
        text: the raw token
        key: line key, used in the error message

    Returns:
        the integer value
    """
    try:
        return int(text.strip())
    except ValueError:
        raise InstanceFormatError(f"{key}: {text!r} is not a decimal integer")


def _parse_coeffs(text: str, key: str) -> list[int]:
    """
    Parses a comma separated coefficient list, low-to-high.

    Args:
        text: right hand side of a `key=` line
        key: line key, used in the error message

    Returns:
        list of integers (possibly empty)
    """
    text = text.strip()
    if not text:
        return []
    return [_parse_int(tok, key) for tok in text.split(",")]


def parse_instance(text: str) -> Instance:
    """
    Parses the `p=`, `f=`, `a=`, `g=` instance format.

    Args:
        text: file contents

    Returns:
        Instance with coefficients reduced modulo p
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InstanceFormatError(f"line {lineno}: expected key=value")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if key not in INSTANCE_KEYS:
            raise InstanceFormatError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise InstanceFormatError(f"line {lineno}: duplicate key {key!r}")
        values[key] = rhs

    missing = [k for k in ("p", "f", "a") if k not in values]
    if missing:
        raise InstanceFormatError(f"missing keys: {', '.join(missing)}")
    p = _parse_int(values["p"], "p")
    try:
        get_field(p)
    except ValueError as e:
        raise InstanceFormatError(f"p: {e}")
    f = [c % p for c in _parse_coeffs(values["f"], "f")]
    while f and f[-1] == 0:
        f.pop()
    if len(f) < 2:
        raise InstanceFormatError("f must have positive degree")
    a = [c % p for c in _parse_coeffs(values["a"], "a")]
    g = [c % p for c in _parse_coeffs(values.get("g", ""), "g")]
    return Instance(p=p, f=f, a=a, g=g, params={"n": len(f) - 1})


def format_instance(inst: Instance) -> str:
    lines = [f"p={inst.p}"]
    for key in ("f", "a", "g"):
        lines.append(f"{key}=" + ",".join(str(c) for c in getattr(inst, key)))
    return "\n".join(lines) + "\n"


def read_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(inst))
    logger.info(f"Instance written to {path}")
