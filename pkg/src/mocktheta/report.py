"""Verification report records shared by the checkers and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Optional

from .series import TruncSeries, first_mismatch

__all__ = [
    "Mismatch",
    "VerificationReport",
    "compare",
    "locate",
    "all_passed",
    "Stopwatch",
    "PASS",
    "FAIL",
    "SIGN_FLIPPED_PASS",
]

PASS = "pass"
FAIL = "fail"
SIGN_FLIPPED_PASS = "sign-flipped-pass"


@dataclass(frozen=True)
class Mismatch:
    exponent: int
    lhs: int
    rhs: int
    index: Optional[int] = None  # sequence index (n or k) when the check is per-term

    def to_dict(self) -> dict:
        out = {"exponent": self.exponent, "lhs": self.lhs, "rhs": self.rhs}
        if self.index is not None:
            out["index"] = self.index
        return out


@dataclass
class VerificationReport:
    identity_id: str
    order: int
    status: str
    first_mismatch: Optional[Mismatch] = None
    elapsed_ms: float = 0.0
    notes: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SIGN_FLIPPED_PASS):
            raise ValueError(f"bad status {self.status!r}")
        if (self.status == FAIL) != (self.first_mismatch is not None):
            raise ValueError("a failing report needs a mismatch, a passing one must not have one")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "order": self.order,
            "status": self.status,
            "first_mismatch": None if self.first_mismatch is None else self.first_mismatch.to_dict(),
            "elapsed_ms": round(self.elapsed_ms, 3),
            "notes": self.notes,
        }

    def line(self) -> str:
        text = f"{self.identity_id:<18} N={self.order:<6} {self.status:<18} {self.elapsed_ms:9.1f} ms"
        if self.first_mismatch is not None:
            fm = self.first_mismatch
            at = f" n={fm.index}" if fm.index is not None else ""
            text += f"  mismatch{at} at q^{fm.exponent}: {fm.lhs} != {fm.rhs}"
        if self.notes:
            text += f"  [{self.notes}]"
        return text


class Stopwatch:
    def __init__(self):
        self._t0 = time.perf_counter()

    @property
    def ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0


def locate(lhs: TruncSeries, rhs: TruncSeries, index: Optional[int] = None) -> Optional[Mismatch]:
    k = first_mismatch(lhs, rhs)
    if k is None:
        return None
    return Mismatch(k, lhs[k], rhs[k], index)


def compare(identity_id: str, lhs: TruncSeries, rhs: TruncSeries, clock: Stopwatch, notes: str = "") -> VerificationReport:
    """Exact comparison of two series at their common order."""
    miss = locate(lhs, rhs)
    return VerificationReport(
        identity_id,
        min(lhs.order, rhs.order),
        PASS if miss is None else FAIL,
        miss,
        clock.ms,
        notes,
    )


def all_passed(reports: List[VerificationReport]) -> bool:
    return all(r.passed for r in reports)
