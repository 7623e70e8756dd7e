"""Pass thresholds of every certification test, kept in one table.

Verdicts are pure functions of (statistic, threshold): each test computes its statistic and asks
the matching ``Threshold`` whether it passes.

Sources:
- AIS-31 (BSI, 2001 functionality classes), Procedure A and B bounds
- NIST SP 800-90B, permutation test decision rule and 99% confidence level
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from ..exceptions import ValidationError

Relation = Literal["open", "closed", "lt", "le", "gt", "ge"]

_SYMBOLS: dict[str, str] = {"lt": "<", "le": "<=", "gt": ">", "ge": ">="}


@dataclass(frozen=True)
class Threshold:
    """One acceptance interval or bound."""

    name: str
    relation: Relation
    low: float | None = None
    high: float | None = None
    description: str = ""

    def check(self, value: float) -> bool:
        match self.relation:
            case "open":
                return self._low < value < self._high
            case "closed":
                return self._low <= value <= self._high
            case "lt":
                return value < self._high
            case "le":
                return value <= self._high
            case "gt":
                return value > self._low
            case "ge":
                return value >= self._low
        raise ValidationError(f"unknown relation {self.relation!r}", field="relation")

    @property
    def _low(self) -> float:
        if self.low is None:
            raise ValidationError(f"threshold {self.name} has no lower bound", field="low")
        return self.low

    @property
    def _high(self) -> float:
        if self.high is None:
            raise ValidationError(f"threshold {self.name} has no upper bound", field="high")
        return self.high

    def describe(self) -> str:
        if self.relation == "open":
            return f"{self.low:g} < x < {self.high:g}"
        if self.relation == "closed":
            return f"{self.low:g} <= x <= {self.high:g}"
        bound = self.high if self.relation in ("lt", "le") else self.low
        return f"x {_SYMBOLS[self.relation]} {bound:g}"


# ============================================================================
# AIS-31 Procedure A (T0-T5) and Procedure B (T6-T8)
# ============================================================================

AIS31_BLOCK_BITS = 20_000
AIS31_BLOCKS = 257
T0_WORD_BITS = 48
T0_WORDS = 1 << 16
T4_LONG_RUN = 34
T5_SHIFT_MAX = 5000
T6_BITS = 100_000
T7_SAMPLES = 100_000
T8_L = 8
T8_Q = 2560
T8_K = 256_000

T1_MONOBIT = Threshold("T1", "open", 9654, 10346, "ones in a 20,000-bit block")
T2_POKER = Threshold("T2", "open", 1.03, 57.4, "poker statistic over 5000 nibbles")
T3_RUNS: dict[int, Threshold] = {
    length: Threshold(f"T3.{length}", "closed", low, high, f"runs of length {length}")
    for length, (low, high) in {
        1: (2267, 2733),
        2: (1079, 1421),
        3: (502, 748),
        4: (223, 402),
        5: (90, 223),
        6: (90, 223),  # length 6 and above
    }.items()
}
T4_LONG_RUN_LIMIT = Threshold("T4", "lt", high=T4_LONG_RUN, description="longest run")
T5_AUTOCORRELATION = Threshold("T5", "open", 2326, 2674, "Z_tau over 10,000 bits")
T6A_UNIFORM = Threshold("T6a", "lt", high=0.025, description="|P(1) - 0.5|")
T6B_UNIFORM = Threshold("T6b", "lt", high=0.02, description="|v(01|0) - v(11|1)|")
T7_HOMOGENEITY = Threshold("T7", "lt", high=15.13, description="2x2 chi-square, 1 dof")
T8_ENTROPY = Threshold("T8", "ge", low=7.976, description="Coron entropy per 8-bit word")

# ============================================================================
# SP 800-90B
# ============================================================================

CONFIDENCE_Z = 2.576
"""Two-sided 99% normal quantile used by the non-IID estimators."""

IID_LOW_FRACTION = 5 / 10_000
"""Fail when C0 + C1 <= this fraction of the permutation count."""

IID_HIGH_FRACTION = 9_995 / 10_000
"""Fail when C0 >= this fraction of the permutation count."""

NONCE_ALPHA = 0.01
UNIFORMITY_ALPHA = 0.001

THRESHOLDS: dict[str, Threshold] = {
    t.name: t
    for t in [
        T1_MONOBIT,
        T2_POKER,
        *T3_RUNS.values(),
        T4_LONG_RUN_LIMIT,
        T5_AUTOCORRELATION,
        T6A_UNIFORM,
        T6B_UNIFORM,
        T7_HOMOGENEITY,
        T8_ENTROPY,
    ]
}


def get_threshold(name: str) -> Threshold:
    """Look up a threshold by test name (e.g. ``"T1"``, ``"T3.4"``)."""
    try:
        return THRESHOLDS[name]
    except KeyError:
        raise ValidationError(
            f"unknown threshold {name!r}; known: {', '.join(sorted(THRESHOLDS))}", field="name"
        ) from None


def iid_fails(c0: int, c1: int, permutations: int) -> bool:
    """Permutation-test decision: True when the original statistic is extreme."""
    return c0 + c1 <= IID_LOW_FRACTION * permutations or c0 >= IID_HIGH_FRACTION * permutations
