"""Nonce distillation and the parameters derived from it.

A nonce bit is the parity of 12 consecutive measurement LSBs. The 341-bit buffer is split into
a seed window [0, 64) for the challenge LFSR, a parameter window [64, 244) of 20 nine-bit
slots (6-bit RC field, then 3-bit TCC field), and an unassigned reserve [244, 341).
Fields are read little-endian by bit index: bit i of a field contributes 2^i.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from .constants import (
    MEASUREMENTS_PER_PHASE,
    NONCE_BITS,
    NONCE_GROUP,
    PARAM_SLOTS,
    PARAM_WINDOW,
    RC_MAX,
    RC_MIN,
    RESERVE_WINDOW,
    SEED_WINDOW,
    TCC_MAX,
    TCC_MIN,
)
from .exceptions import ValidationError

_RC_FIELD_BITS = 6
_TCC_FIELD_BITS = 3
_SLOT_BITS = _RC_FIELD_BITS + _TCC_FIELD_BITS


@dataclass(frozen=True)
class IterationParams:
    """Range Constant and Trim Code Constant of one sponge iteration."""

    rc: int
    tcc: int

    def __post_init__(self) -> None:
        if not RC_MIN <= self.rc <= RC_MAX:
            raise ValidationError(f"rc must be in [{RC_MIN}, {RC_MAX}], got {self.rc}", field="rc")
        if not TCC_MIN <= self.tcc <= TCC_MAX or self.tcc % 2:
            raise ValidationError(
                f"tcc must be even in [{TCC_MIN}, {TCC_MAX}], got {self.tcc}", field="tcc"
            )

    def to_dict(self) -> dict[str, int]:
        return {"rc": self.rc, "tcc": self.tcc}


ParamSchedule = Callable[[int], IterationParams]
"""Maps a sponge iteration to its parameters."""


@dataclass(frozen=True, eq=False)
class NonceBuffer:
    """341 distilled dynamic-entropy bits."""

    bits: np.ndarray  # uint8, NONCE_BITS

    def __post_init__(self) -> None:
        if self.bits.shape != (NONCE_BITS,):
            raise ValidationError(
                f"nonce must hold {NONCE_BITS} bits, got shape {self.bits.shape}", field="bits"
            )
        self.bits.setflags(write=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NonceBuffer) and bool(np.array_equal(self.bits, other.bits))

    __hash__ = None  # type: ignore[assignment]

    @property
    def seed_window(self) -> np.ndarray:
        return self.bits[SEED_WINDOW[0] : SEED_WINDOW[1]]

    @property
    def param_window(self) -> np.ndarray:
        return self.bits[PARAM_WINDOW[0] : PARAM_WINDOW[1]]

    @property
    def reserve(self) -> np.ndarray:
        return self.bits[RESERVE_WINDOW[0] : RESERVE_WINDOW[1]]

    def to_hex(self) -> str:
        """Hex dump, bit i of the buffer is bit (i % 8) of byte i // 8."""
        return np.packbits(self.bits, bitorder="little").tobytes().hex()

    def to_dict(self) -> dict[str, Any]:
        return {"bits": NONCE_BITS, "ones": int(self.bits.sum()), "hex": self.to_hex()}


def _field_value(bits: np.ndarray) -> int:
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def distill(lsb_stream: np.ndarray) -> NonceBuffer:
    """XOR each group of 12 consecutive LSBs into one nonce bit.

    The 4 LSBs left over after 341 groups are discarded.

    Raises:
        ValidationError: If the stream does not hold exactly 4096 bits.
    """
    lsb = np.asarray(lsb_stream, dtype=np.uint8)
    if lsb.shape != (MEASUREMENTS_PER_PHASE,):
        raise ValidationError(
            f"distill needs {MEASUREMENTS_PER_PHASE} LSBs, got shape {lsb.shape}",
            field="lsb_stream",
        )
    groups = (lsb[: NONCE_BITS * NONCE_GROUP] & 1).reshape(NONCE_BITS, NONCE_GROUP)
    return NonceBuffer(np.bitwise_xor.reduce(groups, axis=1).astype(np.uint8))


def derive_seed(nonce: NonceBuffer) -> int:
    """Pack the seed window into a 64-bit word (bit i -> 2^i)."""
    return _field_value(nonce.seed_window)


def derive_params(nonce: NonceBuffer, iteration: int) -> IterationParams:
    """Randomized RC/TCC for ``iteration``; the 20 slots repeat every 20 iterations."""
    start = _SLOT_BITS * (iteration % PARAM_SLOTS)
    window = nonce.param_window
    rc_field = _field_value(window[start : start + _RC_FIELD_BITS])
    tcc_field = _field_value(window[start + _RC_FIELD_BITS : start + _SLOT_BITS])
    return IterationParams(rc=RC_MIN + rc_field, tcc=TCC_MIN + 2 * tcc_field)


def param_schedule(
    nonce: NonceBuffer, fixed_rc: int | None = None, fixed_tcc: int | None = None
) -> ParamSchedule:
    """Build the per-iteration parameter source.

    Args:
        nonce: Buffer supplying randomized values.
        fixed_rc: Hold RC constant at this value instead of randomizing it.
        fixed_tcc: Hold TCC constant at this value instead of randomizing it.
    """

    def schedule(iteration: int) -> IterationParams:
        params = derive_params(nonce, iteration)
        if fixed_rc is None and fixed_tcc is None:
            return params
        return IterationParams(
            rc=params.rc if fixed_rc is None else fixed_rc,
            tcc=params.tcc if fixed_tcc is None else fixed_tcc,
        )

    return schedule
