"""The sponge loop: DVDiff -> GPEV -> SF chain -> BitGen, 2048 iterations per timing phase.

All arithmetic after DVDiff is integer arithmetic on raw fixed-point values, so results are
bit-exact and platform independent.
"""

from __future__ import annotations

import time
from typing import Literal

import numpy as np

from ..constants import (
    BITS_PER_CYCLE,
    FIXED_ONE,
    GPEV_LITERAL_MIN_NUM,
    GPEV_TRIM_DEN,
    GPEV_TRIM_NUM,
    ITERATIONS_PER_CYCLE,
    SET_SIZE,
    TCC_MAX,
    TCC_MIN,
)
from ..entropy.types import TimingRecord
from ..exceptions import DegenerateRangeError, ValidationError
from ..logging_config import create_logger
from ..nonce import IterationParams, NonceBuffer, ParamSchedule, derive_params
from ..sequence.selector import pair_seeds, select_indices
from .fixed_point import round_half_away, wrap_sf
from .types import DvdSet, SfState, SpongeResult, SpongeState, Stage, TraceHook

logger = create_logger(__name__)

GpevBounds = Literal["symmetric", "literal"]


def _read_only(values: np.ndarray) -> np.ndarray:
    view = values.view()
    view.setflags(write=False)
    return view


# ── DVDiff ──


def dv_diff(dv_a: np.ndarray, dv_b: np.ndarray, iteration: int) -> DvdSet:
    """Pairwise differences of one iteration.

    The selector pair (ia_j, ib_j) writes ``dv_a[ia_j] - dv_b[ib_j]`` to lane ``ia_j``, so
    each lane stays attached to one DV_A element across iterations.
    """
    if dv_a.shape != (SET_SIZE,) or dv_b.shape != (SET_SIZE,):
        raise ValidationError(f"dv_diff needs two sets of {SET_SIZE} values", field="dv")
    ia, ib = select_indices(*pair_seeds(iteration))
    values = np.empty(SET_SIZE, dtype=np.int64)
    values[ia] = dv_a[ia].astype(np.int64) - dv_b[ib].astype(np.int64)
    return DvdSet(values, Stage.RAW)


# ── GPEV ──


def gpev_compensate(
    dvd: DvdSet, rc: int, bounds: GpevBounds = "symmetric", iteration: int | None = None
) -> DvdSet:
    """Standardize the raw DVD set and rescale it by ``rc``.

    DVD_c = (DVD - mean) * rc / range with range = bounded_max - bounded_min. The symmetric
    bounds trim 5% toward zero on both sides (0.95 max, 0.95 min); ``literal`` uses
    0.95 max and 1.05 min. The quotient is evaluated once in integers and rounded half away
    from zero to F = 4.

    Raises:
        DegenerateRangeError: If the range is below one TDC count.
    """
    if dvd.stage is not Stage.RAW:
        raise ValidationError(f"gpev expects a raw DVD set, got {dvd.stage}", field="dvd")
    values = dvd.values.astype(np.int64)
    count = values.size
    total = int(values.sum())
    high, low = int(values.max()), int(values.min())
    min_num = GPEV_TRIM_NUM if bounds == "symmetric" else GPEV_LITERAL_MIN_NUM
    # range scaled by GPEV_TRIM_DEN to stay integral
    scaled_range = GPEV_TRIM_NUM * high - min_num * low
    if scaled_range < GPEV_TRIM_DEN:
        raise DegenerateRangeError(
            f"DVD range {scaled_range / GPEV_TRIM_DEN:.3f} counts is below 1 count",
            iteration=iteration,
            range_counts=scaled_range / GPEV_TRIM_DEN,
        )
    numerator = (count * values - total) * (rc * GPEV_TRIM_DEN * FIXED_ONE)
    return DvdSet(round_half_away(numerator, count * scaled_range), Stage.COMPENSATED)


# ── Spread-factor chaining ──


def sf_chain(dvd_c: DvdSet, sf: SfState, tcc: int) -> tuple[DvdSet, SfState]:
    """Fold each compensated value into the TCC window, reflecting odd regions.

    Per lane: v = dvd_c - sf; r = v - k*TCC with r in (-TCC/2, TCC/2]. Odd |k| emits -r and
    moves sf by -2r (wrapped into [-64, 64)); even |k| emits r and leaves sf alone.
    """
    if tcc % 2 or not TCC_MIN <= tcc <= TCC_MAX:
        raise ValidationError(f"tcc must be even in [{TCC_MIN}, {TCC_MAX}], got {tcc}", field="tcc")
    period = tcc * FIXED_ONE
    half = period // 2
    v = dvd_c.values - sf.sf
    k = -((half - v) // period)
    r = v - k * period
    odd = (k & 1).astype(bool)
    out = np.where(odd, -r, r)
    new_sf = np.where(odd, wrap_sf(sf.sf - 2 * r), sf.sf)
    return DvdSet(out, Stage.CHAINED), SfState(new_sf)


# ── BitGen ──


def bit_gen(dvd_cs: DvdSet, state: SpongeState) -> np.ndarray:
    """Sign of each value; zeros take the alternating toggle, which persists across calls."""
    values = dvd_cs.values
    bits = (values > 0).astype(np.uint8)
    zeros = np.flatnonzero(values == 0)
    if zeros.size:
        bits[zeros] = (state.zero_toggle + np.arange(zeros.size)) & 1
        state.zero_toggle ^= zeros.size & 1
    return bits


# ── Loop ──


def sponge_run(
    timing: TimingRecord,
    nonce: NonceBuffer,
    chaining_enabled: bool = True,
    *,
    params: ParamSchedule | None = None,
    gpev_bounds: GpevBounds = "symmetric",
    trace: TraceHook | None = None,
    zero_toggle: int = 0,
) -> SpongeResult:
    """Squeeze 2048 x 2048 bits out of one timing record.

    Args:
        timing: DV_A / DV_B of the timing phase.
        nonce: Boot-strap nonce; randomizes RC/TCC unless ``params`` overrides it.
        chaining_enabled: False reproduces the unchained ablation (no SF state).
        params: Per-iteration parameter source, defaults to ``derive_params(nonce, i)``.
        gpev_bounds: GPEV bound rule.
        trace: Optional observer of every DVD_cs set; receives read-only arrays.
        zero_toggle: Toggle carried over from the previous cycle.

    Raises:
        DegenerateRangeError: If GPEV meets a dead distribution.
    """
    schedule: ParamSchedule = params or (lambda i: derive_params(nonce, i))
    state = SpongeState(zero_toggle=zero_toggle & 1, clamp_events=timing.clamp_events)
    bits = np.empty(BITS_PER_CYCLE, dtype=np.uint8)
    positive = negative = 0
    started = time.perf_counter()

    for iteration in range(ITERATIONS_PER_CYCLE):
        state.iteration = iteration
        current: IterationParams = schedule(iteration)
        dvd = dv_diff(timing.dv_a, timing.dv_b, iteration)
        try:
            dvd_c = gpev_compensate(dvd, current.rc, gpev_bounds, iteration)
        except DegenerateRangeError:
            state.degenerate_range_events += 1
            logger.error(f"dead entropy source at iteration {iteration}")
            raise
        if chaining_enabled:
            dvd_cs, state.sf = sf_chain(dvd_c, state.sf, current.tcc)
        else:
            dvd_cs = DvdSet(dvd_c.values, Stage.CHAINED)  # pass-through
        if trace is not None:
            trace(iteration, current, _read_only(dvd_cs.values), _read_only(state.sf.sf))
        positive += int(np.count_nonzero(dvd_cs.values > 0))
        negative += int(np.count_nonzero(dvd_cs.values < 0))
        bits[iteration * SET_SIZE : (iteration + 1) * SET_SIZE] = bit_gen(dvd_cs, state)

    elapsed = time.perf_counter() - started
    logger.debug(f"sponge squeezed {BITS_PER_CYCLE} bits in {elapsed:.2f}s")
    return SpongeResult(
        bits=bits,
        state=state,
        positive=positive,
        negative=negative,
        zero=BITS_PER_CYCLE - positive - negative,
        chaining_enabled=chaining_enabled,
    )
