"""SP 800-90B non-IID min-entropy estimators for binary samples.

Every estimator returns min-entropy in bits per bit, in [0, 1].
"""

from __future__ import annotations

from math import log2, sqrt
from typing import Any

import numpy as np
from scipy.optimize import brentq

from ..exceptions import InsufficientDataError
from ..logging_config import create_logger
from .thresholds import CONFIDENCE_Z
from .types import BitSequence

logger = create_logger(__name__)

RECOMMENDED_BITS = 1_000_000
MARKOV_LENGTH = 128
COMPRESSION_BLOCK = 6
COMPRESSION_DICT = 1000
COMPRESSION_SIGMA_FACTOR = 0.5907


def _check_length(seq: BitSequence, minimum: int, name: str) -> np.ndarray:
    if len(seq) < minimum:
        raise InsufficientDataError(
            f"{name} estimate needs at least {minimum} bits, got {len(seq)}",
            test=name,
            required_bits=minimum,
            available_bits=len(seq),
        )
    if len(seq) < RECOMMENDED_BITS:
        logger.debug(f"{name} estimate on {len(seq)} bits; {RECOMMENDED_BITS} recommended")
    return np.asarray(seq.bits, dtype=np.int64)


def _clamp(entropy: float) -> float:
    return float(min(1.0, max(0.0, entropy)))


def mcv_estimate(seq: BitSequence) -> float:
    """Most common value: upper 99% bound on the majority-symbol probability."""
    bits = _check_length(seq, 2, "mcv")
    n = bits.size
    p_hat = max(int(bits.sum()), n - int(bits.sum())) / n
    p_u = min(1.0, p_hat + CONFIDENCE_Z * sqrt(p_hat * (1 - p_hat) / (n - 1)))
    return _clamp(-log2(p_u))


def collision_estimate(seq: BitSequence) -> float:
    """Mean distance to the first repeated bit, lower-bounded at 99% confidence.

    For binary samples a collision always occurs within three draws, and the expected
    distance is 2 + 2p(1-p), which is solved directly for p.
    """
    bits = _check_length(seq, 6, "collision")
    values = bits.tolist()
    n = len(values)
    times: list[int] = []
    i = 0
    while i + 1 < n:
        if values[i] == values[i + 1]:
            times.append(2)
            i += 2
        elif i + 2 < n:
            times.append(3)
            i += 3
        else:
            break
    t = np.array(times, dtype=np.float64)
    v = t.size
    mean = float(t.mean())
    sigma = float(t.std(ddof=1)) if v > 1 else 0.0
    lower = mean - CONFIDENCE_Z * sigma / sqrt(v)
    excess = (lower - 2.0) / 2.0
    if excess >= 0.25:
        p = 0.5
    elif excess <= 0.0:
        p = 1.0
    else:
        p = 0.5 + sqrt(0.25 - excess)
    return _clamp(-log2(p))


def markov_estimate(seq: BitSequence) -> float:
    """First-order Markov model: most likely 128-bit path, normalized per bit."""
    bits = _check_length(seq, 2, "markov")
    n = bits.size
    p1 = bits.sum() / n
    p0 = 1.0 - p1
    prev, nxt = bits[:-1], bits[1:]
    c = np.zeros((2, 2))
    np.add.at(c, (prev, nxt), 1)
    rows = c.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(rows > 0, c / np.where(rows > 0, rows, 1), 0.0)
        log_t = np.log2(t)
        log_p0, log_p1 = np.log2(p0), np.log2(p1)
    k = MARKOV_LENGTH
    candidates = [
        log_p0 + (k - 1) * log_t[0, 0],  # 000...0
        log_p0 + (k // 2) * log_t[0, 1] + (k // 2 - 1) * log_t[1, 0],  # 0101...01
        log_p0 + log_t[0, 1] + (k - 2) * log_t[1, 1],  # 0111...1
        log_p1 + log_t[1, 0] + (k - 2) * log_t[0, 0],  # 1000...0
        log_p1 + (k // 2) * log_t[1, 0] + (k // 2 - 1) * log_t[0, 1],  # 1010...10
        log_p1 + (k - 1) * log_t[1, 1],  # 111...1
    ]
    # paths through an unseen transition have zero probability
    finite = [x for x in candidates if np.isfinite(x)]
    log_pmax = max(finite) if finite else 0.0
    return _clamp(-log_pmax / k)


def compression_estimate(seq: BitSequence) -> float:
    """Maurer-style universal statistic on 6-bit blocks with a 1000-block dictionary."""
    bits = _check_length(seq, COMPRESSION_BLOCK * (COMPRESSION_DICT + 2), "compression")
    b = COMPRESSION_BLOCK
    blocks = bits[: (bits.size // b) * b].reshape(-1, b) @ (1 << np.arange(b - 1, -1, -1))
    total = blocks.size
    d = COMPRESSION_DICT
    nu = total - d

    # 1-based position of the previous equal block, 0 when there is none
    positions = np.arange(1, total + 1)
    order = np.lexsort((positions, blocks))
    previous = np.zeros(total, dtype=np.int64)
    same = blocks[order[1:]] == blocks[order[:-1]]
    previous[order[1:][same]] = positions[order[:-1][same]]
    test_pos = positions[d:]
    distances = np.where(previous[d:] > 0, test_pos - previous[d:], test_pos)

    logs = np.log2(distances)
    mean = float(logs.mean())
    sigma = COMPRESSION_SIGMA_FACTOR * sqrt(max(0.0, float(np.sum(logs**2)) / (nu - 1) - mean**2))
    lower = mean - CONFIDENCE_Z * sigma / sqrt(nu)

    # G(z) sums log2(u) z^2 (1-z)^(u-1) over u < t and log2(t) z (1-z)^(t-1), for each test t;
    # swapping the sums weights each u by the number of t above it
    u = np.arange(1, total, dtype=np.float64)
    counts = np.where(u <= d, float(nu), total - u)
    weight_u = counts * np.log2(u)
    t = np.arange(d + 1, total + 1, dtype=np.float64)
    log_t = np.log2(t)

    def g(z: float) -> float:
        if z <= 0.0:
            return 0.0
        inner = z * z * float(np.dot(weight_u, np.power(1.0 - z, u - 1)))
        tail = z * float(np.dot(log_t, np.power(1.0 - z, t - 1)))
        return (inner + tail) / nu

    symbols = float(1 << b)

    def expected(p: float) -> float:
        return g(p) + (symbols - 1) * g((1.0 - p) / (symbols - 1))

    p_min = 1.0 / symbols
    if expected(p_min) <= lower:
        return 1.0
    if lower <= 0.0:
        return 0.0
    p = brentq(lambda x: expected(x) - lower, p_min, 1.0, xtol=1e-12)
    return _clamp(-log2(p) / b)


def estimator_suite(seq: BitSequence) -> dict[str, Any]:
    """All four estimates plus their minimum."""
    estimates = {
        "mcv": mcv_estimate(seq),
        "collision": collision_estimate(seq),
        "markov": markov_estimate(seq),
        "compression": compression_estimate(seq),
    }
    estimates["minimum"] = min(estimates.values())
    logger.info(
        "min-entropy estimates: " + ", ".join(f"{k}={v:.5f}" for k, v in estimates.items())
    )
    return estimates
