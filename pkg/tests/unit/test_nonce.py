"""Tests for nonce distillation, seed derivation and the RC/TCC schedule."""

from __future__ import annotations

import numpy as np
import pytest

from softsponge.constants import MEASUREMENTS_PER_PHASE, NONCE_BITS
from softsponge.exceptions import ValidationError
from softsponge.nonce import (
    IterationParams,
    NonceBuffer,
    derive_params,
    derive_seed,
    distill,
    param_schedule,
)


def _make_nonce(ones: list[int] | None = None) -> NonceBuffer:
    bits = np.zeros(NONCE_BITS, dtype=np.uint8)
    for i in ones or []:
        bits[i] = 1
    return NonceBuffer(bits)


def _set_slot(bits: np.ndarray, slot: int, rc_field: int, tcc_field: int) -> None:
    start = 64 + 9 * slot
    for i in range(6):
        bits[start + i] = (rc_field >> i) & 1
    for i in range(3):
        bits[start + 6 + i] = (tcc_field >> i) & 1


class TestDistill:
    def test_alternating_lsbs_give_zero_nonce(self) -> None:
        lsb = np.tile(np.array([0, 1], dtype=np.uint8), MEASUREMENTS_PER_PHASE // 2)
        assert distill(lsb).bits.sum() == 0

    @pytest.mark.parametrize("group", [0, 5, 340], ids=["first", "middle", "last"])
    def test_single_one_sets_its_group(self, group: int) -> None:
        lsb = np.zeros(MEASUREMENTS_PER_PHASE, dtype=np.uint8)
        lsb[12 * group + 7] = 1
        nonce = distill(lsb)
        assert nonce.bits[group] == 1
        assert nonce.bits.sum() == 1

    def test_trailing_lsbs_discarded(self) -> None:
        lsb = np.zeros(MEASUREMENTS_PER_PHASE, dtype=np.uint8)
        lsb[-4:] = 1
        assert distill(lsb).bits.sum() == 0

    def test_wrong_length(self) -> None:
        with pytest.raises(ValidationError):
            distill(np.zeros(4095, dtype=np.uint8))

    def test_parity_linear(self) -> None:
        rng = np.random.default_rng(2)
        a = rng.integers(0, 2, MEASUREMENTS_PER_PHASE, dtype=np.uint8)
        b = rng.integers(0, 2, MEASUREMENTS_PER_PHASE, dtype=np.uint8)
        assert np.array_equal(distill(a ^ b).bits, distill(a).bits ^ distill(b).bits)


class TestNonceBuffer:
    def test_windows(self) -> None:
        nonce = _make_nonce()
        assert nonce.seed_window.size == 64
        assert nonce.param_window.size == 180
        assert nonce.reserve.size == NONCE_BITS - 244

    def test_shape_checked(self) -> None:
        with pytest.raises(ValidationError):
            NonceBuffer(np.zeros(340, dtype=np.uint8))

    def test_immutable(self) -> None:
        nonce = _make_nonce()
        with pytest.raises(ValueError):
            nonce.bits[0] = 1

    def test_equality(self) -> None:
        assert _make_nonce([3]) == _make_nonce([3])
        assert _make_nonce([3]) != _make_nonce([4])

    def test_hex_is_little_endian(self) -> None:
        assert _make_nonce([0]).to_hex().startswith("01")
        assert _make_nonce([9]).to_hex().startswith("0002")

    def test_to_dict(self) -> None:
        d = _make_nonce([1, 2]).to_dict()
        assert d["bits"] == NONCE_BITS
        assert d["ones"] == 2


class TestDeriveSeed:
    @pytest.mark.parametrize(
        ("bit", "expected"), [(0, 1), (63, 1 << 63)], ids=["lsb", "msb"]
    )
    def test_single_bit(self, bit: int, expected: int) -> None:
        assert derive_seed(_make_nonce([bit])) == expected

    def test_param_window_ignored(self) -> None:
        assert derive_seed(_make_nonce([64, 100])) == 0


class TestDeriveParams:
    def test_zero_fields(self) -> None:
        assert derive_params(_make_nonce(), 0) == IterationParams(rc=128, tcc=8)

    def test_full_fields(self) -> None:
        bits = np.zeros(NONCE_BITS, dtype=np.uint8)
        _set_slot(bits, 3, 63, 7)
        assert derive_params(NonceBuffer(bits), 3) == IterationParams(rc=191, tcc=22)

    def test_slots_recur_every_20(self) -> None:
        bits = np.zeros(NONCE_BITS, dtype=np.uint8)
        _set_slot(bits, 5, 17, 2)
        nonce = NonceBuffer(bits)
        assert derive_params(nonce, 5) == derive_params(nonce, 25)
        assert derive_params(nonce, 5) == IterationParams(rc=145, tcc=12)

    def test_params_in_range_for_random_nonce(self) -> None:
        bits = np.random.default_rng(1).integers(0, 2, NONCE_BITS, dtype=np.uint8)
        nonce = NonceBuffer(bits)
        for i in range(20):
            p = derive_params(nonce, i)
            assert 128 <= p.rc <= 191
            assert 8 <= p.tcc <= 22 and p.tcc % 2 == 0


class TestIterationParams:
    @pytest.mark.parametrize(
        ("rc", "tcc"),
        [(127, 8), (192, 8), (128, 7), (128, 24), (128, 9)],
        ids=["rc-low", "rc-high", "tcc-low", "tcc-high", "tcc-odd"],
    )
    def test_out_of_range(self, rc: int, tcc: int) -> None:
        with pytest.raises(ValidationError):
            IterationParams(rc=rc, tcc=tcc)


class TestParamSchedule:
    def test_default_follows_nonce(self) -> None:
        nonce = _make_nonce([64])
        assert param_schedule(nonce)(0) == IterationParams(rc=129, tcc=8)

    def test_fixed_rc_keeps_random_tcc(self) -> None:
        bits = np.zeros(NONCE_BITS, dtype=np.uint8)
        _set_slot(bits, 0, 10, 3)
        schedule = param_schedule(NonceBuffer(bits), fixed_rc=168)
        assert schedule(0) == IterationParams(rc=168, tcc=14)

    def test_both_fixed(self) -> None:
        schedule = param_schedule(_make_nonce(), fixed_rc=168, fixed_tcc=18)
        assert schedule(7) == IterationParams(rc=168, tcc=18)

    def test_invalid_override_rejected(self) -> None:
        with pytest.raises(ValidationError):
            param_schedule(_make_nonce(), fixed_tcc=19)(0)
