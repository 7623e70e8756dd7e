"""Dataclasses flowing through the sponge loop."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from ..constants import SET_SIZE
from ..nonce import IterationParams
from .fixed_point import to_real


class Stage(StrEnum):
    RAW = "raw"  # signed TDC-count differences
    COMPENSATED = "compensated"  # GPEV output, fixed point
    CHAINED = "chained"  # after SF chaining, fixed point


@dataclass
class DvdSet:
    """2048 DVD values of one iteration; fixed point from the compensated stage on."""

    values: np.ndarray  # int64
    stage: Stage = Stage.RAW

    @property
    def real(self) -> np.ndarray:
        if self.stage is Stage.RAW:
            return self.values.astype(np.float64)
        return to_real(self.values)


@dataclass
class SfState:
    """Per-lane spread factors, raw fixed point in [-1024, 1024)."""

    sf: np.ndarray

    @classmethod
    def zeros(cls, lanes: int = SET_SIZE) -> SfState:
        return cls(np.zeros(lanes, dtype=np.int64))

    @property
    def real(self) -> np.ndarray:
        return to_real(self.sf)


@dataclass
class SpongeState:
    """Loop state carried across iterations."""

    iteration: int = 0
    zero_toggle: int = 0
    sf: SfState = field(default_factory=SfState.zeros)
    degenerate_range_events: int = 0
    clamp_events: int = 0

    def health(self) -> dict[str, int]:
        return {
            "degenerate_range_events": self.degenerate_range_events,
            "clamp_events": self.clamp_events,
        }


TraceHook = Callable[[int, IterationParams, np.ndarray, np.ndarray], None]
"""Called as hook(iteration, params, dvd_cs_raw, sf_raw) with read-only arrays."""


@dataclass
class SpongeResult:
    """Bits squeezed from one timing phase plus loop statistics."""

    bits: np.ndarray  # uint8, one bit per element
    state: SpongeState
    positive: int = 0
    negative: int = 0
    zero: int = 0
    chaining_enabled: bool = True

    @property
    def sign_imbalance(self) -> float:
        """|#positive - #negative| over all DVD_cs values."""
        total = self.positive + self.negative + self.zero
        return abs(self.positive - self.negative) / total if total else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "bits": int(self.bits.size),
            "ones": int(self.bits.sum()),
            "positive": self.positive,
            "negative": self.negative,
            "zero": self.zero,
            "sign_imbalance": round(self.sign_imbalance, 6),
            "chaining_enabled": self.chaining_enabled,
            "health": self.state.health(),
        }
