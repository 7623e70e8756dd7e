"""Distribution checks on DVD_cs values and short bit strings.

The uniformity test runs on DVD_cs normalized by each iteration's TCC. Raw chained values sit
on the lattice {-8T, ..., 8T} (T = TCC, 16 raw units per count), with the two endpoints
reached only half as often as interior points, so expected bin masses come from that lattice
and not from equal bin widths.
"""

from __future__ import annotations

from collections.abc import Mapping
from math import sqrt
from typing import Any

import numpy as np
from scipy.special import erfc
from scipy.stats import chi2

from ..constants import FIXED_ONE, UNIFORMITY_BINS
from ..exceptions import InsufficientDataError, ValidationError
from .thresholds import NONCE_ALPHA, UNIFORMITY_ALPHA
from .types import BitSequence, TestVerdict


def sign_balance(values: np.ndarray) -> dict[str, Any]:
    """Counts of positive, negative and zero values plus the normalized imbalance."""
    v = np.asarray(values)
    positive = int(np.count_nonzero(v > 0))
    negative = int(np.count_nonzero(v < 0))
    total = int(v.size)
    return {
        "positive": positive,
        "negative": negative,
        "zero": total - positive - negative,
        "imbalance": abs(positive - negative) / total if total else 0.0,
    }


def _lattice_mass(tcc: int, edges: np.ndarray) -> np.ndarray:
    half = tcc * FIXED_ONE // 2
    lattice = np.arange(-half, half + 1)
    weights = np.ones(lattice.size, dtype=np.float64)
    weights[[0, -1]] = 0.5
    weights /= weights.sum()
    return np.histogram(lattice / (2 * half), bins=edges, weights=weights)[0]


def uniformity_chi_square(
    values_by_tcc: Mapping[int, np.ndarray],
    bins: int = UNIFORMITY_BINS,
    alpha: float = UNIFORMITY_ALPHA,
) -> TestVerdict:
    """Chi-square goodness of fit of pooled TCC-normalized DVD_cs values.

    Args:
        values_by_tcc: Raw fixed-point DVD_cs values grouped by the TCC they were folded with.
        bins: Equal-width bins over [-0.5, 0.5].
        alpha: Significance level; passes when p >= alpha.
    """
    edges = np.linspace(-0.5, 0.5, bins + 1)
    observed = np.zeros(bins, dtype=np.float64)
    expected = np.zeros(bins, dtype=np.float64)
    for tcc, raw in values_by_tcc.items():
        v = np.asarray(raw, dtype=np.float64)
        if v.size == 0:
            continue
        half = tcc * FIXED_ONE / 2
        if np.any(np.abs(v) > half):
            raise ValidationError(f"values exceed +/-TCC/2 for tcc={tcc}", field="values_by_tcc")
        observed += np.histogram(v / (2 * half), bins=edges)[0]
        expected += v.size * _lattice_mass(tcc, edges)
    total = int(observed.sum())
    if total == 0:
        raise InsufficientDataError("no values to test", test="uniformity", required_bits=1)

    used = expected > 0
    statistic = float(np.sum((observed[used] - expected[used]) ** 2 / expected[used]))
    dof = int(np.count_nonzero(used)) - 1
    p_value = float(chi2.sf(statistic, dof))
    return TestVerdict(
        name="uniformity",
        statistic=statistic,
        threshold=f"p >= {alpha:g}",
        passed=p_value >= alpha,
        details={"p_value": p_value, "dof": dof, "samples": total},
    )


def monobit_p_value(seq: BitSequence) -> float:
    """Frequency test p-value: erfc(|S_n| / sqrt(2n))."""
    n = len(seq)
    s = 2 * seq.ones - n
    return float(erfc(abs(s) / sqrt(n) / sqrt(2)))


def poker_p_value(seq: BitSequence, m: int = 4) -> float:
    """Poker test p-value on non-overlapping m-bit words (chi-square, 2^m - 1 dof)."""
    k = len(seq) // m
    if k < 5 * (1 << m):
        raise InsufficientDataError(
            "poker test needs at least 5 words per cell",
            test="poker",
            required_bits=5 * (1 << m) * m,
            available_bits=len(seq),
        )
    words = seq.bits[: k * m].reshape(k, m).astype(np.int64)
    values = words @ (1 << np.arange(m - 1, -1, -1))
    counts = np.bincount(values, minlength=1 << m)
    statistic = (1 << m) / k * float(np.sum(counts.astype(np.float64) ** 2)) - k
    return float(chi2.sf(statistic, (1 << m) - 1))


def nonce_quality(seq: BitSequence, alpha: float = NONCE_ALPHA) -> list[TestVerdict]:
    """Monobit and poker verdicts on concatenated nonce bits."""
    verdicts = []
    for name, p in (("monobit", monobit_p_value(seq)), ("poker", poker_p_value(seq))):
        verdicts.append(
            TestVerdict(
                name=name,
                statistic=p,
                threshold=f"p >= {alpha:g}",
                passed=p >= alpha,
                details={"bits": len(seq)},
            )
        )
    return verdicts
