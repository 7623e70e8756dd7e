"""Shared dataclasses for the simulated delay source."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constants import (
    DEFAULT_COLS,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_ROWS,
    DEFAULT_SEGMENTS_PER_STAGE,
    SET_SIZE,
)
from ..exceptions import ValidationError

DelayValue = int
"""12-bit TDC count of one measured path."""


@dataclass(frozen=True)
class Geometry:
    """Netlist abstraction: rows x cols stages, each offering ``segments_per_stage`` segments."""

    rows: int = DEFAULT_ROWS
    cols: int = DEFAULT_COLS
    segments_per_stage: int = DEFAULT_SEGMENTS_PER_STAGE

    @property
    def stages(self) -> int:
        return self.rows * self.cols

    @property
    def selector_space(self) -> int:
        """Distinct segment selections a challenge can encode."""
        return self.segments_per_stage**self.stages

    def to_dict(self) -> dict[str, int]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "segments_per_stage": self.segments_per_stage,
        }


@dataclass(frozen=True)
class EnvCondition:
    """DC environment applied to every nominal delay before digitization."""

    temp_offset: float = 0.0  # TDC counts, additive
    supply_scale: float = 1.0  # multiplicative

    def __post_init__(self) -> None:
        if not self.supply_scale > 0:
            raise ValidationError(
                f"supply_scale must be > 0, got {self.supply_scale}", field="supply_scale"
            )

    @property
    def is_identity(self) -> bool:
        return self.temp_offset == 0.0 and self.supply_scale == 1.0

    def to_dict(self) -> dict[str, float]:
        return {"temp_offset": self.temp_offset, "supply_scale": self.supply_scale}


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean Gaussian measurement noise."""

    sigma: float = DEFAULT_NOISE_SIGMA  # TDC counts
    noise_seed: int = 0

    def stream(self) -> NoiseStream:
        """Open a fresh, seeded noise stream."""
        return NoiseStream(self)

    def to_dict(self) -> dict[str, Any]:
        return {"sigma": self.sigma, "noise_seed": self.noise_seed}


class NoiseStream:
    """Stateful noise source for a sequence of measurements.

    Also holds the saturating-counter health statistic of the TDC it feeds: every
    measurement clamped to the 12-bit range increments ``clamp_events``.
    """

    def __init__(self, model: NoiseModel):
        self.model = model
        self._rng = np.random.default_rng(model.noise_seed)
        self.draws = 0
        self.clamp_events = 0

    def draw(self, count: int) -> np.ndarray:
        """Draw ``count`` noise samples in counts."""
        self.draws += count
        return self.model.sigma * self._rng.standard_normal(count)


@dataclass(frozen=True, eq=False)
class DeviceFingerprint:
    """Per-device segment-delay tables (static entropy).

    ``segment_delays`` has shape (2, stages, segments): one table per transition edge.
    Calibrated counts are ``gain * picoseconds + offset``.
    """

    device_seed: int
    geometry: Geometry
    segment_delays: np.ndarray  # picoseconds
    gain: float  # counts per picosecond
    offset: float  # counts

    def to_dict(self) -> dict[str, Any]:
        """Serializable form: the table is regenerated from seed and geometry."""
        return {"device_seed": self.device_seed, "geometry": self.geometry.to_dict()}


@dataclass
class TimingRecord:
    """Output of one timing phase: two DV sets plus the measurement LSBs in order."""

    dv_a: np.ndarray  # uint16, SET_SIZE
    dv_b: np.ndarray  # uint16, SET_SIZE
    lsb_stream: np.ndarray  # uint8, 2 * SET_SIZE
    clamp_events: int = 0
    env: EnvCondition = field(default_factory=EnvCondition)

    def __post_init__(self) -> None:
        if self.dv_a.shape != (SET_SIZE,) or self.dv_b.shape != (SET_SIZE,):
            raise ValidationError(f"DV sets must hold {SET_SIZE} values each", field="dv")

    @property
    def all_dvs(self) -> np.ndarray:
        """Every measurement in order."""
        return np.concatenate([self.dv_a, self.dv_b])

    def summary(self) -> dict[str, Any]:
        return {
            "dv_a_min": int(self.dv_a.min()),
            "dv_a_max": int(self.dv_a.max()),
            "dv_b_min": int(self.dv_b.min()),
            "dv_b_max": int(self.dv_b.max()),
            "lsb_ones": int(self.lsb_stream.sum()),
            "clamp_events": self.clamp_events,
        }
