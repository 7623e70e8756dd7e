"""Device fingerprints: seeded segment-delay tables and challenge-to-path mapping.

A path crosses every stage once. The challenge word picks the segment used in each stage:
bit 0 selects the rise/fall table, then the remaining 63 bits are read as a mixed-radix
number whose base-``segments_per_stage`` digits, least significant first, index the segment
of stage 0, 1, ... The output tap ``path_idx`` offsets the final-stage index, so the 32
paths of one challenge share every segment except the last.

Routing stages vary little from segment to segment; the output-tap stage carries most of
the spread. One challenge family then sweeps nearly the whole tap table, and the DVs of a
single timing phase cover most of the calibrated window.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from ..constants import CALIBRATED_MAX_COUNTS, CALIBRATED_MIN_COUNTS, TDC_PS_PER_COUNT
from ..exceptions import InvalidGeometryError
from ..logging_config import create_logger
from .types import DeviceFingerprint, Geometry

logger = create_logger(__name__)

_STAGE_MEAN_PS = 1_000.0
_STAGE_MEAN_SPREAD_PS = 60.0
_ROUTING_SIGMA_PS = 15.0
_TAP_SIGMA_PS = 90.0
_SELECTOR_LIMIT = 1 << 63


def _check_geometry(geometry: Geometry) -> None:
    if geometry.rows < 1 or geometry.cols < 1 or geometry.segments_per_stage < 1:
        raise InvalidGeometryError(
            f"geometry counts must be >= 1, got {geometry.to_dict()}", geometry=geometry.to_dict()
        )
    if geometry.selector_space > _SELECTOR_LIMIT:
        raise InvalidGeometryError(
            f"{geometry.stages} stages of {geometry.segments_per_stage} segments do not fit "
            "in a 64-bit challenge",
            geometry=geometry.to_dict(),
        )


def _segment_sigmas(stages: int) -> np.ndarray:
    sigmas = np.full((1, stages, 1), _ROUTING_SIGMA_PS)
    sigmas[0, -1, 0] = _TAP_SIGMA_PS
    return sigmas


def build_device(device_seed: int, geometry: Geometry | None = None) -> DeviceFingerprint:
    """Build the static-entropy fingerprint of one simulated device.

    Segment delays are Gaussian around a per-stage nominal mean, independently for the
    rising and falling tables; the output-tap stage has a wider spread than the routing
    stages. Calibration is the affine map sending the fastest achievable path to 300 counts
    and the slowest to 1000 counts.

    Args:
        device_seed: 64-bit device identity.
        geometry: Stage layout; defaults to 3 x 2 stages of 80 segments.

    Returns:
        The immutable fingerprint.

    Raises:
        InvalidGeometryError: If any count is zero or the selectors overflow the challenge.
    """
    geometry = geometry or Geometry()
    _check_geometry(geometry)

    rng = np.random.default_rng(device_seed)
    stage_means = rng.normal(_STAGE_MEAN_PS, _STAGE_MEAN_SPREAD_PS, size=(2, geometry.stages, 1))
    delays = rng.normal(
        stage_means,
        _segment_sigmas(geometry.stages),
        size=(2, geometry.stages, geometry.segments_per_stage),
    )
    delays.setflags(write=False)

    fastest = float(delays.min(axis=2).sum(axis=1).min())
    slowest = float(delays.max(axis=2).sum(axis=1).max())
    if slowest > fastest:
        gain = (CALIBRATED_MAX_COUNTS - CALIBRATED_MIN_COUNTS) / (slowest - fastest)
    else:
        # single-segment geometries have one path per edge
        gain = 1.0 / TDC_PS_PER_COUNT
    offset = CALIBRATED_MIN_COUNTS - gain * fastest

    logger.debug(
        f"device {device_seed:#x}: paths {fastest:.1f}..{slowest:.1f} ps, gain {gain:.4f} counts/ps"
    )
    return DeviceFingerprint(
        device_seed=device_seed,
        geometry=geometry,
        segment_delays=delays,
        gain=gain,
        offset=offset,
    )


def device_from_dict(data: dict[str, Any]) -> DeviceFingerprint:
    """Rebuild a fingerprint from its ``to_dict`` form."""
    return build_device(int(data["device_seed"]), Geometry(**data.get("geometry", {})))


def segment_indices(
    geometry: Geometry, words: np.ndarray, path_idx: np.ndarray | int
) -> tuple[np.ndarray, np.ndarray]:
    """Map challenge words to (edge, per-stage segment index).

    Args:
        geometry: Stage layout.
        words: uint64 challenge words, any shape.
        path_idx: Output tap(s), broadcast against ``words``.

    Returns:
        (edge, indices) where ``indices`` has a trailing stage axis.
    """
    words = np.asarray(words, dtype=np.uint64)
    path_idx = np.asarray(path_idx, dtype=np.int64)
    words, path_idx = np.broadcast_arrays(words, path_idx)
    base = np.uint64(geometry.segments_per_stage)
    rest = words >> np.uint64(1)
    digits = []
    for _ in range(geometry.stages):
        digits.append((rest % base).astype(np.int64))
        rest = rest // base
    fields = np.stack(digits, axis=-1)
    fields[..., -1] += path_idx
    edge = (words & np.uint64(1)).astype(np.int64)
    return edge, fields % geometry.segments_per_stage


def nominal_counts(
    device: DeviceFingerprint, words: np.ndarray, path_idx: np.ndarray | int
) -> np.ndarray:
    """Calibrated, noise-free path delays in TDC counts."""
    edge, idx = segment_indices(device.geometry, words, path_idx)
    stage = np.arange(device.geometry.stages)
    picoseconds = device.segment_delays[edge[..., None], stage, idx].sum(axis=-1)
    return device.gain * picoseconds + device.offset
