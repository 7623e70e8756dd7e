"""Signed fixed point with 4 fractional bits (value = raw / 16).

Sponge arrays hold raw int64 values; the helpers here convert and round them. With F = 4 and
even TCC, every TCC/2 boundary and every SF bound is an exact raw integer.
"""

from __future__ import annotations

import numpy as np

from ..constants import FIXED_ONE, SF_LIMIT

SF_RAW_LIMIT = SF_LIMIT * FIXED_ONE
_SF_RAW_PERIOD = 2 * SF_RAW_LIMIT


def to_real(raw: np.ndarray) -> np.ndarray:
    """Raw fixed-point array to float64."""
    return np.asarray(raw, dtype=np.float64) / FIXED_ONE


def from_real(values: np.ndarray) -> np.ndarray:
    """Float array to raw fixed point, rounding half away from zero."""
    scaled = np.asarray(values, dtype=np.float64) * FIXED_ONE
    return (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)


def round_half_away(numerator: np.ndarray, denominator: int) -> np.ndarray:
    """Integer ``numerator / denominator`` rounded half away from zero (denominator > 0)."""
    num = np.asarray(numerator, dtype=np.int64)
    den = np.int64(denominator)
    magnitude = (2 * np.abs(num) + den) // (2 * den)
    return np.where(num < 0, -magnitude, magnitude)


def wrap_sf(raw: np.ndarray) -> np.ndarray:
    """Wrap raw spread factors into [-64, 64)."""
    return (np.asarray(raw, dtype=np.int64) + SF_RAW_LIMIT) % _SF_RAW_PERIOD - SF_RAW_LIMIT
