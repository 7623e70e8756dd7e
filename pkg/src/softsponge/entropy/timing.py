"""TDC digitization and the 4096-measurement timing phase."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..constants import CHALLENGES_PER_PHASE, PATHS_PER_CHALLENGE, SET_SIZE, TDC_MAX
from ..exceptions import ValidationError
from ..logging_config import create_logger
from ..sequence.lfsr import Challenge
from .device import nominal_counts
from .types import DelayValue, DeviceFingerprint, EnvCondition, NoiseStream, TimingRecord

logger = create_logger(__name__)


def _digitize(analog: np.ndarray, noise: NoiseStream) -> np.ndarray:
    # floor(x + 0.5) keeps integer temp offsets exact: digitize(x + d) == digitize(x) + d
    counts = np.floor(analog + noise.draw(analog.size).reshape(analog.shape) + 0.5)
    clamped = np.clip(counts, 0, TDC_MAX)
    events = int(np.count_nonzero(clamped != counts))
    if events:
        noise.clamp_events += events
        logger.warning(f"{events} TDC measurement(s) clamped to the 12-bit range")
    return clamped.astype(np.uint16)


def _analog(
    device: DeviceFingerprint, words: np.ndarray, paths: np.ndarray, env: EnvCondition
) -> np.ndarray:
    return nominal_counts(device, words, paths) * env.supply_scale + env.temp_offset


def measure_path(
    device: DeviceFingerprint,
    challenge: Challenge,
    path_idx: int,
    env: EnvCondition,
    noise: NoiseStream,
) -> DelayValue:
    """Measure one path: scale, shift, add one noise draw, round and clamp to 12 bits."""
    if not 0 <= path_idx < PATHS_PER_CHALLENGE:
        raise ValidationError(
            f"path_idx must be in [0, {PATHS_PER_CHALLENGE - 1}], got {path_idx}", field="path_idx"
        )
    analog = _analog(
        device,
        np.array([challenge.word], dtype=np.uint64),
        np.array([path_idx]),
        env,
    )
    return int(_digitize(analog, noise)[0])


def timing_phase(
    device: DeviceFingerprint,
    challenges: Sequence[Challenge],
    env: EnvCondition,
    noise: NoiseStream,
) -> TimingRecord:
    """Measure all 32 paths of each of 128 challenges, one at a time.

    Measurement ``m`` is path ``m % 32`` of challenge ``m // 32``; the first 2048 form DV_A
    and the rest DV_B.
    """
    if len(challenges) != CHALLENGES_PER_PHASE:
        raise ValidationError(
            f"a timing phase needs {CHALLENGES_PER_PHASE} challenges, got {len(challenges)}",
            field="challenges",
        )
    words = np.array([c.word for c in challenges], dtype=np.uint64)
    grid_words = np.repeat(words, PATHS_PER_CHALLENGE)
    grid_paths = np.tile(np.arange(PATHS_PER_CHALLENGE), CHALLENGES_PER_PHASE)

    clamps_before = noise.clamp_events
    dvs = _digitize(_analog(device, grid_words, grid_paths, env), noise)
    lsb = (dvs & 1).astype(np.uint8)
    return TimingRecord(
        dv_a=dvs[:SET_SIZE].copy(),
        dv_b=dvs[SET_SIZE:].copy(),
        lsb_stream=lsb,
        clamp_events=noise.clamp_events - clamps_before,
        env=env,
    )
