"""Input validation utilities for run configuration values.

Provides validation for the parameter types a RunConfig carries:
- Seeds (64-bit unsigned integers)
- Range Constants and Trim Code Constants (nonce-derived or fixed)
- Noise and environment magnitudes (non-negative / positive reals)
- Counts (bit budgets, permutation counts, pair counts)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .constants import RC_MAX, RC_MIN, TCC_MAX, TCC_MIN


@dataclass
class ValidationResult:
    """Result of a validation operation."""

    valid: bool
    value: Any = None
    error: str | None = None

    @classmethod
    def success(cls, value: Any = None) -> ValidationResult:
        return cls(valid=True, value=value)

    @classmethod
    def failure(cls, error: str) -> ValidationResult:
        return cls(valid=False, error=error)


def _as_int(value: Any, name: str) -> ValidationResult:
    if isinstance(value, bool):
        return ValidationResult.failure(f"{name} must be an integer, got bool")
    if isinstance(value, int):
        return ValidationResult.success(value)
    try:
        text = str(value).strip().lower()
        return ValidationResult.success(int(text, 0))
    except (TypeError, ValueError):
        return ValidationResult.failure(f"{name} must be an integer, got {value!r}")


def _as_float(value: Any, name: str) -> ValidationResult:
    try:
        number = float(value)
    except (TypeError, ValueError):
        return ValidationResult.failure(f"{name} must be a number, got {value!r}")
    if not math.isfinite(number):
        return ValidationResult.failure(f"{name} must be finite, got {number}")
    return ValidationResult.success(number)


def validate_seed(value: Any, name: str = "seed") -> ValidationResult:
    """Validate a 64-bit unsigned seed.

    Args:
        value: Integer or integer literal (decimal or 0x-prefixed).
        name: The parameter name for error messages.

    Returns:
        ValidationResult with the seed as int or error.
    """
    result = _as_int(value, name)
    if not result.valid:
        return result
    if not 0 <= result.value < (1 << 64):
        return ValidationResult.failure(f"{name} must fit in 64 unsigned bits, got {result.value}")
    return result


def validate_rc(value: Any, name: str = "fixed_rc") -> ValidationResult:
    """Validate a Range Constant in [128, 191]."""
    result = _as_int(value, name)
    if not result.valid:
        return result
    if not RC_MIN <= result.value <= RC_MAX:
        return ValidationResult.failure(
            f"{name} must be in [{RC_MIN}, {RC_MAX}], got {result.value}"
        )
    return result


def validate_tcc(value: Any, name: str = "fixed_tcc") -> ValidationResult:
    """Validate a Trim Code Constant: even and in [8, 22]."""
    result = _as_int(value, name)
    if not result.valid:
        return result
    tcc = result.value
    if not TCC_MIN <= tcc <= TCC_MAX or tcc % 2:
        return ValidationResult.failure(
            f"{name} must be an even integer in [{TCC_MIN}, {TCC_MAX}], got {tcc}"
        )
    return result


def validate_sigma(value: Any, name: str = "noise_sigma") -> ValidationResult:
    """Validate a noise standard deviation (counts, >= 0)."""
    result = _as_float(value, name)
    if not result.valid:
        return result
    if result.value < 0:
        return ValidationResult.failure(f"{name} must be >= 0, got {result.value}")
    return result


def validate_temp_offset(value: Any, name: str = "temp_offset") -> ValidationResult:
    """Validate an additive delay shift in TDC counts."""
    result = _as_float(value, name)
    if not result.valid:
        return result
    # Beyond a few thousand counts every measurement clamps
    if abs(result.value) > 4095:
        return ValidationResult.failure(f"{name} must be within +/-4095 counts, got {result.value}")
    return result


def validate_supply_scale(value: Any, name: str = "supply_scale") -> ValidationResult:
    """Validate a multiplicative delay factor (> 0)."""
    result = _as_float(value, name)
    if not result.valid:
        return result
    if result.value <= 0:
        return ValidationResult.failure(f"{name} must be > 0, got {result.value}")
    return result


def validate_count(
    value: Any, name: str, min_value: int = 1, max_value: int | None = None
) -> ValidationResult:
    """Validate a positive integer count.

    Args:
        value: The count to validate.
        name: The parameter name for error messages.
        min_value: Minimum allowed value.
        max_value: Maximum allowed value, or None for unbounded.

    Returns:
        ValidationResult with the count as int or error.
    """
    result = _as_int(value, name)
    if not result.valid:
        return result
    if result.value < min_value:
        return ValidationResult.failure(f"{name} must be >= {min_value}, got {result.value}")
    if max_value is not None and result.value > max_value:
        return ValidationResult.failure(f"{name} must be <= {max_value}, got {result.value}")
    return result


def validate_flag(value: Any, name: str) -> ValidationResult:
    """Validate a boolean flag given as bool or text (true/false, on/off, 1/0)."""
    if isinstance(value, bool):
        return ValidationResult.success(value)
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return ValidationResult.success(True)
    if text in ("0", "false", "no", "off"):
        return ValidationResult.success(False)
    return ValidationResult.failure(f"{name} must be a boolean, got {value!r}")


def validate_choice(value: Any, name: str, choices: tuple[str, ...]) -> ValidationResult:
    """Validate a string against a fixed set of choices."""
    text = str(value).strip().lower()
    if text not in choices:
        return ValidationResult.failure(
            f"{name} must be one of {', '.join(choices)}, got {value!r}"
        )
    return ValidationResult.success(text)
