"""AIS-31 statistical tests T0-T8.

Procedure A runs the disjointness test T0 once, then the basic tests T1-T5 on 257 disjoint
20,000-bit blocks. Procedure B runs T6-T8 on the bits that follow. Blocks are taken
sequentially without gaps. A single basic-test failure across the 257 blocks triggers one
repetition of the T1-T5 block regime on fresh bits, which must then pass completely.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from math import log

import numpy as np

from ..exceptions import InsufficientDataError
from ..logging_config import create_logger
from .thresholds import (
    AIS31_BLOCK_BITS,
    AIS31_BLOCKS,
    T0_WORD_BITS,
    T0_WORDS,
    T1_MONOBIT,
    T2_POKER,
    T3_RUNS,
    T4_LONG_RUN,
    T4_LONG_RUN_LIMIT,
    T5_AUTOCORRELATION,
    T5_SHIFT_MAX,
    T6_BITS,
    T6A_UNIFORM,
    T6B_UNIFORM,
    T7_HOMOGENEITY,
    T7_SAMPLES,
    T8_ENTROPY,
    T8_K,
    T8_L,
    T8_Q,
)
from .types import BitSequence, TestVerdict

logger = create_logger(__name__)

T0_BITS = T0_WORDS * T0_WORD_BITS
PROCEDURE_A_BLOCK_BITS = AIS31_BLOCKS * AIS31_BLOCK_BITS
T8_BITS = (T8_Q + T8_K) * T8_L


def _require(bits: np.ndarray, needed: int, test: str) -> None:
    if bits.size < needed:
        raise InsufficientDataError(
            f"{test} needs {needed} bits, got {bits.size}",
            test=test,
            required_bits=needed,
            available_bits=int(bits.size),
        )


def _insufficient(name: str, error: InsufficientDataError, threshold: str) -> TestVerdict:
    return TestVerdict(
        name=name,
        statistic=None,
        threshold=threshold,
        passed=False,
        details={
            "insufficient_data": True,
            "required_bits": getattr(error, "required_bits", None),
            "available_bits": getattr(error, "available_bits", None),
        },
    )


def _runs(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run values and run lengths of a 0/1 array."""
    starts = np.concatenate(([0], np.flatnonzero(np.diff(block)) + 1))
    lengths = np.diff(np.concatenate((starts, [block.size])))
    return block[starts], lengths


# ── Procedure A ──


def t0_disjointness(bits: np.ndarray) -> TestVerdict:
    """All 2^16 consecutive 48-bit words must be pairwise distinct."""
    _require(bits, T0_BITS, "T0")
    words = np.packbits(bits[:T0_BITS].reshape(T0_WORDS, T0_WORD_BITS), axis=1)
    padded = np.zeros((T0_WORDS, 8), dtype=np.uint8)
    padded[:, 2:] = words
    distinct = int(np.unique(padded.view(">u8").ravel()).size)
    return TestVerdict(
        name="T0",
        statistic=float(T0_WORDS - distinct),
        threshold=T0_THRESHOLD,
        passed=distinct == T0_WORDS,
        details={"words": T0_WORDS, "distinct": distinct},
    )


def t1_monobit(block: np.ndarray) -> TestVerdict:
    _require(block, AIS31_BLOCK_BITS, "T1")
    ones = int(np.count_nonzero(block[:AIS31_BLOCK_BITS]))
    return TestVerdict("T1", float(ones), T1_MONOBIT.describe(), T1_MONOBIT.check(ones))


def t2_poker(block: np.ndarray) -> TestVerdict:
    _require(block, AIS31_BLOCK_BITS, "T2")
    nibbles = block[:AIS31_BLOCK_BITS].reshape(-1, 4).astype(np.int64) @ np.array([8, 4, 2, 1])
    counts = np.bincount(nibbles, minlength=16).astype(np.float64)
    k = nibbles.size
    statistic = 16.0 / k * float(np.sum(counts**2)) - k
    return TestVerdict("T2", statistic, T2_POKER.describe(), T2_POKER.check(statistic))


def t3_runs(block: np.ndarray) -> TestVerdict:
    """Runs of length 1..5 and >= 6, counted separately for zeros and ones."""
    _require(block, AIS31_BLOCK_BITS, "T3")
    values, lengths = _runs(block[:AIS31_BLOCK_BITS])
    capped = np.minimum(lengths, 6)
    statistic: dict[str, float] = {}
    passed = True
    for bit in (0, 1):
        counts = np.bincount(capped[values == bit], minlength=7)
        for length, threshold in T3_RUNS.items():
            count = int(counts[length])
            statistic[f"{bit}:{length}"] = float(count)
            passed &= threshold.check(count)
    return TestVerdict("T3", statistic, "runs within AIS-31 intervals", passed)


def t4_long_run(block: np.ndarray) -> TestVerdict:
    _require(block, AIS31_BLOCK_BITS, "T4")
    longest = int(_runs(block[:AIS31_BLOCK_BITS])[1].max())
    return TestVerdict(
        "T4",
        float(longest),
        T4_LONG_RUN_LIMIT.describe(),
        T4_LONG_RUN_LIMIT.check(longest),
        {"limit": T4_LONG_RUN},
    )


def t5_autocorrelation(block: np.ndarray) -> TestVerdict:
    """Pick the most extreme shift on the first half, test it on the second half."""
    _require(block, AIS31_BLOCK_BITS, "T5")
    half = AIS31_BLOCK_BITS // 2
    first = block[:half].astype(np.int64)
    head = first[:T5_SHIFT_MAX]
    # Z_tau = sum(head) + sum(first[tau:tau+5000]) - 2 * sum(head * first[tau:tau+5000])
    products = np.correlate(first, head, mode="valid")
    prefix = np.concatenate(([0], np.cumsum(first)))
    window = prefix[T5_SHIFT_MAX:] - prefix[: half - T5_SHIFT_MAX + 1]
    z = int(head.sum()) + window - 2 * products
    deviation = np.abs(z[1:] - T5_SHIFT_MAX // 2)
    tau = int(np.argmax(deviation)) + 1

    second = block[half:AIS31_BLOCK_BITS]
    statistic = int(np.count_nonzero(second[:T5_SHIFT_MAX] ^ second[tau : tau + T5_SHIFT_MAX]))
    return TestVerdict(
        "T5",
        float(statistic),
        T5_AUTOCORRELATION.describe(),
        T5_AUTOCORRELATION.check(statistic),
        {"tau": tau},
    )


T0_THRESHOLD = "no repeated 48-bit word"
BASIC_THRESHOLDS: dict[str, str] = {
    "T1": T1_MONOBIT.describe(),
    "T2": T2_POKER.describe(),
    "T3": "runs within AIS-31 intervals",
    "T4": T4_LONG_RUN_LIMIT.describe(),
    "T5": T5_AUTOCORRELATION.describe(),
}

BASIC_TESTS: tuple[Callable[[np.ndarray], TestVerdict], ...] = (
    t1_monobit,
    t2_poker,
    t3_runs,
    t4_long_run,
    t5_autocorrelation,
)


@dataclass
class _BlockTally:
    passed: dict[str, int]
    failures: int
    start: int


def _run_blocks(bits: np.ndarray, start: int) -> _BlockTally:
    _require(bits[start:], PROCEDURE_A_BLOCK_BITS, "T1-T5")
    passed = {f"T{i}": 0 for i in range(1, 6)}
    failures = 0
    for b in range(AIS31_BLOCKS):
        offset = start + b * AIS31_BLOCK_BITS
        block = bits[offset : offset + AIS31_BLOCK_BITS]
        for test in BASIC_TESTS:
            verdict = test(block)
            if verdict.passed:
                passed[verdict.name] += 1
            else:
                failures += 1
                logger.debug(f"{verdict.name} failed on block {b}: {verdict.statistic}")
    return _BlockTally(passed, failures, start)


def procedure_a(bits: np.ndarray, retry_offset: int | None = None) -> list[TestVerdict]:
    """T0 plus the 257-block regime of T1-T5, with the single-failure retry rule.

    Args:
        bits: The sequence under test, starting at the first T0 bit.
        retry_offset: Where repetition blocks start; defaults to right after the first regime.
    """
    try:
        verdicts = [t0_disjointness(bits)]
    except InsufficientDataError as e:
        verdicts = [_insufficient("T0", e, T0_THRESHOLD)]
    try:
        tally = _run_blocks(bits, T0_BITS)
    except InsufficientDataError as e:
        return verdicts + [_insufficient(n, e, t) for n, t in BASIC_THRESHOLDS.items()]
    retried = False
    if tally.failures == 1:
        offset = retry_offset if retry_offset is not None else T0_BITS + PROCEDURE_A_BLOCK_BITS
        if bits.size - offset >= PROCEDURE_A_BLOCK_BITS:
            logger.info("one basic test failed once; repeating T1-T5 on fresh blocks")
            tally = _run_blocks(bits, offset)
            retried = True
        else:
            logger.warning("one basic test failed once but no bits remain for the repetition")
    for name, count in tally.passed.items():
        verdicts.append(
            TestVerdict(
                name=name,
                statistic=float(count),
                threshold=BASIC_THRESHOLDS[name],
                passed=count == AIS31_BLOCKS,
                details={
                    "pass_rate": f"{count}/{AIS31_BLOCKS}",
                    "retried": retried,
                    "first_bit": tally.start,
                },
            )
        )
    return verdicts


# ── Procedure B ──


def _collect(
    bits: np.ndarray, width: int, prefix_bits: int, samples: int, test: str
) -> tuple[list[np.ndarray], int]:
    """Split into disjoint ``width``-bit tuples until every prefix has ``samples`` tuples.

    Returns the final bit of the first ``samples`` tuples per prefix, and the bits consumed.
    """
    tuples = bits[: (bits.size // width) * width].reshape(-1, width).astype(np.int64)
    weights = 1 << np.arange(prefix_bits - 1, -1, -1)
    prefixes = tuples[:, :prefix_bits] @ weights
    outcomes: list[np.ndarray] = []
    consumed = 0
    for value in range(1 << prefix_bits):
        where = np.flatnonzero(prefixes == value)
        if where.size < samples:
            raise InsufficientDataError(
                f"{test} ran out of bits collecting {samples} tuples per prefix",
                test=test,
                required_bits=(1 << prefix_bits) * samples * width,
                available_bits=int(bits.size),
            )
        outcomes.append(tuples[where[:samples], -1])
        consumed = max(consumed, int(where[samples - 1]) + 1)
    return outcomes, consumed * width


def t6_uniform(bits: np.ndarray) -> tuple[TestVerdict, int]:
    """T6a on 100,000 single bits, T6b on disjoint pairs. Returns the verdict and bits used."""
    _require(bits, T6_BITS, "T6")
    ones = float(np.mean(bits[:T6_BITS]))
    t6a = abs(ones - 0.5)
    (after0, after1), used = _collect(bits[T6_BITS:], 2, 1, T6_BITS, "T6b")
    t6b = abs(float(after0.mean()) - float(after1.mean()))
    verdict = TestVerdict(
        "T6",
        {"T6a": t6a, "T6b": t6b},
        f"T6a: {T6A_UNIFORM.describe()}, T6b: {T6B_UNIFORM.describe()}",
        T6A_UNIFORM.check(t6a) and T6B_UNIFORM.check(t6b),
    )
    return verdict, T6_BITS + used


def _homogeneity(group_a: np.ndarray, group_b: np.ndarray) -> float:
    """Chi-square statistic of a 2x2 contingency table of next-bit outcomes."""
    n_a, n_b = group_a.size, group_b.size
    observed = np.array(
        [[n_a - group_a.sum(), group_a.sum()], [n_b - group_b.sum(), group_b.sum()]],
        dtype=np.float64,
    )
    pooled = observed.sum(axis=0) / (n_a + n_b)
    expected = np.outer([n_a, n_b], pooled)
    used = expected > 0
    return float(np.sum((observed[used] - expected[used]) ** 2 / expected[used]))


def _t7_part(bits: np.ndarray, history: int, label: str) -> tuple[dict[str, float], int]:
    # prefixes (0, w) and (1, w) sit 2^history apart in the enumeration
    outcomes, used = _collect(bits, history + 2, history + 1, T7_SAMPLES, label)
    stats: dict[str, float] = {}
    for w in range(1 << history):
        key = format(w, f"0{history}b")
        stats[f"{label}[{key}]"] = _homogeneity(outcomes[w], outcomes[w + (1 << history)])
    return stats, used


def t7_homogeneity(bits: np.ndarray) -> tuple[TestVerdict, int]:
    """T7a (one-bit history) and T7b (two-bit history) transition homogeneity."""
    part_a, used_a = _t7_part(bits, 1, "T7a")
    part_b, used_b = _t7_part(bits[used_a:], 2, "T7b")
    statistic = {**part_a, **part_b}
    verdict = TestVerdict(
        "T7",
        statistic,
        T7_HOMOGENEITY.describe(),
        all(T7_HOMOGENEITY.check(v) for v in statistic.values()),
    )
    return verdict, used_a + used_b


def coron_statistic(bits: np.ndarray) -> float:
    """Coron's entropy test value f_C over Q + K eight-bit words."""
    _require(bits, T8_BITS, "T8")
    words = bits[:T8_BITS].reshape(-1, T8_L).astype(np.int64) @ (1 << np.arange(T8_L - 1, -1, -1))
    positions = np.arange(words.size)
    order = np.lexsort((positions, words))
    sorted_words = words[order]
    previous = np.full(words.size, -1, dtype=np.int64)
    same = sorted_words[1:] == sorted_words[:-1]
    previous[order[1:][same]] = order[:-1][same]
    # words unseen so far count their distance from the sequence start
    distance = np.where(previous >= 0, positions - previous, positions + 1)[T8_Q:]
    harmonic = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, distance.max() + 1))))
    return float(np.mean(harmonic[distance - 1]) / log(2))


def t8_entropy(bits: np.ndarray) -> TestVerdict:
    f_c = coron_statistic(bits)
    return TestVerdict("T8", f_c, T8_ENTROPY.describe(), T8_ENTROPY.check(f_c))


def procedure_b(bits: np.ndarray) -> tuple[list[TestVerdict], int]:
    """T6, T7 and T8 on consecutive disjoint stretches. Returns verdicts and bits used."""
    verdicts: list[TestVerdict] = []
    cursor = 0
    for name, threshold, test in (
        ("T6", T6A_UNIFORM.describe(), t6_uniform),
        ("T7", T7_HOMOGENEITY.describe(), t7_homogeneity),
    ):
        try:
            verdict, used = test(bits[cursor:])
        except InsufficientDataError as e:
            verdicts.append(_insufficient(name, e, threshold))
            continue
        verdicts.append(verdict)
        cursor += used
    try:
        verdicts.append(t8_entropy(bits[cursor:]))
        cursor += T8_BITS
    except InsufficientDataError as e:
        verdicts.append(_insufficient("T8", e, T8_ENTROPY.describe()))
    return verdicts, cursor


def ais31_suite(seq: BitSequence) -> list[TestVerdict]:
    """Run T0-T8 and return nine verdicts in test order.

    Procedure B starts right after the first T1-T5 regime; a Procedure A repetition uses the
    bits after Procedure B.
    """
    bits = seq.bits
    b_start = T0_BITS + PROCEDURE_A_BLOCK_BITS
    part_b, used_b = procedure_b(bits[b_start:])
    part_a = procedure_a(bits, retry_offset=b_start + used_b)
    verdicts = part_a + part_b
    passed = sum(v.passed for v in verdicts)
    logger.info(f"AIS-31: {passed}/{len(verdicts)} tests passed on {len(seq)} bits")
    return verdicts
