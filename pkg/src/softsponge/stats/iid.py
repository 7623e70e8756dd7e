"""SP 800-90B permutation testing of the IID assumption.

Eleven statistic families are computed on the original sequence and on seeded Fisher-Yates
shuffles of it. Periodicity and covariance are evaluated at several lags, so the suite yields
19 individual test statistics. Binary input is converted per statistic: 8-bit Hamming weights
for the directional tests, 8-bit packed bytes for collision, periodicity and covariance, and
the raw bits for everything else.

Permutations are split into fixed-size tasks, each drawing from its own child of the master
``SeedSequence``, so counters are identical whatever the worker count.
"""

from __future__ import annotations

import bz2
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constants import DEFAULT_PERMUTATIONS
from ..exceptions import InsufficientDataError, ValidationError
from ..logging_config import create_logger
from .thresholds import iid_fails
from .types import BitSequence

logger = create_logger(__name__)

LAGS = (1, 2, 8, 16, 32)
MIN_PERMUTATIONS = 100
_TASK_SIZE = 50

STATISTIC_NAMES: tuple[str, ...] = (
    "excursion",
    "directional_runs",
    "longest_directional_run",
    "increases_decreases",
    "median_runs",
    "longest_median_run",
    "average_collision",
    "maximum_collision",
    *(f"periodicity[{lag}]" for lag in LAGS),
    *(f"covariance[{lag}]" for lag in LAGS),
    "compression",
)


def _family(name: str) -> str:
    return name.split("[", 1)[0]


# ── conversions ──


def _hamming_weights(bits: np.ndarray) -> np.ndarray:
    usable = bits.size - bits.size % 8
    return bits[:usable].reshape(-1, 8).sum(axis=1, dtype=np.int64)


def _bytes(bits: np.ndarray) -> np.ndarray:
    usable = bits.size - bits.size % 8
    return np.packbits(bits[:usable]).astype(np.int64)


# ── statistics ──


def _run_lengths(signs: np.ndarray) -> np.ndarray:
    if signs.size == 0:
        return np.zeros(0, dtype=np.int64)
    starts = np.concatenate(([0], np.flatnonzero(signs[1:] != signs[:-1]) + 1))
    return np.diff(np.concatenate((starts, [signs.size])))


def _collision_lengths(values: np.ndarray) -> list[int]:
    """Lengths of the greedy segments that each end at their first repeated value."""
    n = values.size
    positions = np.arange(n)
    order = np.lexsort((positions, values))
    nxt = np.full(n, n, dtype=np.int64)
    same = values[order[1:]] == values[order[:-1]]
    nxt[order[:-1][same]] = order[1:][same]
    # a segment starting at i ends at the smallest next-occurrence among its members
    end = np.minimum.accumulate(nxt[::-1])[::-1].tolist()
    lengths: list[int] = []
    i = 0
    while i < n and end[i] < n:
        lengths.append(end[i] - i + 1)
        i = end[i] + 1
    return lengths


def _compressed_size(bits: np.ndarray) -> int:
    text = np.full(2 * bits.size - 1, ord(" "), dtype=np.uint8)
    text[::2] = bits + ord("0")
    return len(bz2.compress(text.tobytes()))


def compute_statistics(bits: np.ndarray) -> np.ndarray:
    """All test statistics of one sequence, in ``STATISTIC_NAMES`` order."""
    x = bits.astype(np.int64)
    n = x.size
    mean = x.sum() / n
    excursion = float(np.max(np.abs(np.cumsum(x) - np.arange(1, n + 1) * mean)))

    weights = _hamming_weights(bits)
    directions = np.where(weights[:-1] <= weights[1:], 1, -1)
    dir_runs = _run_lengths(directions)
    increases = int(np.count_nonzero(directions == 1))

    median_runs = _run_lengths(x)

    symbols = _bytes(bits)
    collisions = _collision_lengths(symbols)

    values = [
        excursion,
        float(dir_runs.size),
        float(dir_runs.max(initial=0)),
        float(max(increases, directions.size - increases)),
        float(median_runs.size),
        float(median_runs.max(initial=0)),
        float(np.mean(collisions)) if collisions else 0.0,
        float(max(collisions, default=0)),
    ]
    values += [float(np.count_nonzero(symbols[:-lag] == symbols[lag:])) for lag in LAGS]
    values += [float(np.dot(symbols[:-lag], symbols[lag:])) for lag in LAGS]
    values.append(float(_compressed_size(bits)))
    return np.array(values)


def _permutation_task(
    bits: np.ndarray, original: np.ndarray, seed: np.random.SeedSequence, count: int
) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    c0 = np.zeros(original.size, dtype=np.int64)
    c1 = np.zeros(original.size, dtype=np.int64)
    for _ in range(count):
        shuffled = compute_statistics(rng.permutation(bits))
        c0 += shuffled < original
        c1 += shuffled == original
    return c0, c1


@dataclass(frozen=True)
class IidStatistic:
    name: str
    value: float
    c0: int
    c1: int
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "C0": self.c0,
            "C1": self.c1,
            "passed": self.passed,
        }


@dataclass
class IidReport:
    """Counters and verdicts of a permutation run."""

    statistics: list[IidStatistic]
    permutations: int
    seed: int
    bits: int
    constant_input: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.constant_input and all(s.passed for s in self.statistics)

    def families(self) -> dict[str, bool]:
        """Verdict per statistic family; a family passes when all its lags pass."""
        result: dict[str, bool] = {}
        for stat in self.statistics:
            family = _family(stat.name)
            result[family] = result.get(family, True) and stat.passed
        return result

    def to_dict(self) -> dict[str, Any]:
        return {
            "permutations": self.permutations,
            "seed": self.seed,
            "bits": self.bits,
            "passed": self.passed,
            "constant_input": self.constant_input,
            "families": self.families(),
            "statistics": [s.to_dict() for s in self.statistics],
            "notes": self.notes,
        }


def iid_permutation_suite(
    seq: BitSequence,
    permutations: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
    workers: int = 1,
) -> IidReport:
    """Run the permutation test.

    Args:
        seq: Bits under test; 10^6 or more is recommended.
        permutations: Shuffle count; fail thresholds scale with it.
        seed: Master seed of the shuffles.
        workers: Worker processes; 1 runs in-process.

    Raises:
        ValidationError: If fewer than 100 permutations are requested.
        InsufficientDataError: If the sequence is too short to form the lagged statistics.
    """
    if permutations < MIN_PERMUTATIONS:
        raise ValidationError(
            f"at least {MIN_PERMUTATIONS} permutations are required, got {permutations}",
            field="permutations",
        )
    bits = np.asarray(seq.bits, dtype=np.uint8)
    min_bits = 8 * (max(LAGS) + 2)
    if bits.size < min_bits:
        raise InsufficientDataError(
            "sequence too short for the IID statistics",
            test="iid",
            required_bits=min_bits,
            available_bits=int(bits.size),
        )
    if bits.size < 1_000_000:
        logger.warning(f"IID testing on {bits.size} bits; 1,000,000 or more is recommended")

    original = compute_statistics(bits)
    sizes = [_TASK_SIZE] * (permutations // _TASK_SIZE)
    if permutations % _TASK_SIZE:
        sizes.append(permutations % _TASK_SIZE)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    c0 = np.zeros(original.size, dtype=np.int64)
    c1 = np.zeros(original.size, dtype=np.int64)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_permutation_task, bits, original, s, n)
                for s, n in zip(seeds, sizes, strict=True)
            ]
            for future in futures:
                a, b = future.result()
                c0 += a
                c1 += b
    else:
        for s, n in zip(seeds, sizes, strict=True):
            a, b = _permutation_task(bits, original, s, n)
            c0 += a
            c1 += b

    stats = [
        IidStatistic(
            name=name,
            value=float(original[i]),
            c0=int(c0[i]),
            c1=int(c1[i]),
            passed=not iid_fails(int(c0[i]), int(c1[i]), permutations),
        )
        for i, name in enumerate(STATISTIC_NAMES)
    ]
    constant = bool(np.all(bits == bits[0]))
    notes = ["constant input: every permutation equals the original"] if constant else []
    report = IidReport(stats, permutations, seed, int(bits.size), constant, notes)
    failed = [s.name for s in stats if not s.passed]
    logger.info(
        f"IID permutation test: {len(stats) - len(failed)}/{len(stats)} statistics passed"
        + (f" (failed: {', '.join(failed)})" if failed else "")
    )
    return report
