"""Simulated path-delay entropy source: device fingerprints, noisy TDC and timing phases."""

from .device import build_device, device_from_dict, nominal_counts, segment_indices
from .timing import measure_path, timing_phase
from .types import (
    DelayValue,
    DeviceFingerprint,
    EnvCondition,
    Geometry,
    NoiseModel,
    NoiseStream,
    TimingRecord,
)

__all__ = [
    "DelayValue",
    "DeviceFingerprint",
    "EnvCondition",
    "Geometry",
    "NoiseModel",
    "NoiseStream",
    "TimingRecord",
    "build_device",
    "device_from_dict",
    "measure_path",
    "nominal_counts",
    "segment_indices",
    "timing_phase",
]
