"""Run reports and their fixed CSV row layout."""
import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

CSV_COLUMNS = ["algo", "n", "m", "d", "mu", "delta", "phase", "millis", "verified", "generic"]


class VerificationMismatch(Exception):
    """A fast result differs from the oracle."""


def digest(coeffs: Sequence[int]) -> str:
    """SHA-256 over the decimal coefficient list."""
    text = ",".join(str(int(c)) for c in coeffs)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class RunReport:
    algo: str
    n: int
    m: int = 0
    d: int = 0
    mu: int = 0
    delta: int = 0
    phases: dict = field(default_factory=dict)
    verified: Optional[bool] = None
    generic: bool = True
    digest: str = ""
    fallback: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.verified is not False

    def rows(self) -> list[dict]:
        phases = self.phases or {"total": 0.0}
        base = {
            "algo": self.algo,
            "n": self.n,
            "m": self.m,
            "d": self.d,
            "mu": self.mu,
            "delta": self.delta,
            "verified": self.verified,
            "generic": self.generic,
            "digest": self.digest,
        }
        return [
            {**base, "phase": name, "millis": round(millis, 3)}
            for name, millis in phases.items()
        ]

    def format_lines(self) -> list[str]:
        head = (
            f"algo={self.algo} n={self.n} m={self.m} d={self.d} mu={self.mu} delta={self.delta} "
            f"verified={_flag(self.verified)} generic={_flag(self.generic)} digest={self.digest}"
        )
        if self.fallback:
            head += f" fallback={self.fallback}"
        lines = [head]
        for name, millis in self.phases.items():
            lines.append(f"  phase={name} millis={millis:.3f}")
        return lines


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return "skipped"
    return "true" if value else "false"


def sort_rows(rows: list[dict]) -> list[dict]:
    """Deterministic order: by algo, then size, then phase name."""
    return sorted(rows, key=lambda r: (r["algo"], r["n"], r["m"], r["d"], r["phase"]))
