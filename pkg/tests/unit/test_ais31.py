"""Tests for the AIS-31 T0-T8 statistics, thresholds and procedures."""

from __future__ import annotations

import numpy as np
import pytest

from softsponge.exceptions import InsufficientDataError, ValidationError
from softsponge.stats import Threshold, coron_statistic, get_threshold, procedure_a, procedure_b
from softsponge.stats.ais31 import (
    T0_BITS,
    t0_disjointness,
    t1_monobit,
    t2_poker,
    t3_runs,
    t4_long_run,
    t5_autocorrelation,
    t6_uniform,
)


def _random_bits(count: int, seed: int = 2024) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, count, dtype=np.uint8)


def _alternating(count: int = 20_000) -> np.ndarray:
    return np.tile(np.array([0, 1], dtype=np.uint8), count // 2)


class TestThresholds:
    @pytest.mark.parametrize(
        ("name", "value", "passed"),
        [
            ("T1", 9654, False),
            ("T1", 9655, True),
            ("T1", 10346, False),
            ("T3.1", 2267, True),
            ("T3.1", 2733, True),
            ("T4", 33, True),
            ("T4", 34, False),
            ("T8", 7.976, True),
        ],
        ids=[
            "t1-low-edge",
            "t1-inside",
            "t1-high-edge",
            "t3-low",
            "t3-high",
            "t4-ok",
            "t4-limit",
            "t8-edge",
        ],
    )
    def test_bounds(self, name: str, value: float, passed: bool) -> None:
        assert get_threshold(name).check(value) is passed

    def test_describe(self) -> None:
        assert get_threshold("T1").describe() == "9654 < x < 10346"
        assert get_threshold("T4").describe() == "x < 34"

    def test_unknown_name(self) -> None:
        with pytest.raises(ValidationError):
            get_threshold("T9")

    def test_missing_bound(self) -> None:
        with pytest.raises(ValidationError):
            Threshold("X", "gt").check(1.0)


class TestBasicTests:
    def test_random_block_passes(self) -> None:
        block = _random_bits(20_000)
        for test in (t1_monobit, t2_poker, t3_runs, t4_long_run, t5_autocorrelation):
            verdict = test(block)
            assert verdict.passed, verdict

    def test_alternating_block(self) -> None:
        block = _alternating()
        assert t1_monobit(block).passed
        assert t1_monobit(block).statistic == 10_000
        assert not t3_runs(block).passed
        assert t4_long_run(block).statistic == 1
        t5 = t5_autocorrelation(block)
        assert t5.details["tau"] == 1
        assert t5.statistic == 5000
        assert not t5.passed

    def test_constant_block(self) -> None:
        block = np.zeros(20_000, dtype=np.uint8)
        assert not t1_monobit(block).passed
        assert t4_long_run(block).statistic == 20_000
        assert not t4_long_run(block).passed

    def test_too_regular_poker_fails(self) -> None:
        patterns = np.array([[(v >> s) & 1 for s in (3, 2, 1, 0)] for v in range(16)])
        block = np.tile(patterns.ravel(), 313)[:20_000].astype(np.uint8)
        verdict = t2_poker(block)
        assert verdict.statistic == pytest.approx(0.0128)
        assert not verdict.passed

    def test_short_block(self) -> None:
        with pytest.raises(InsufficientDataError):
            t1_monobit(np.zeros(19_999, dtype=np.uint8))


class TestT0:
    def test_random_words_distinct(self) -> None:
        verdict = t0_disjointness(_random_bits(T0_BITS))
        assert verdict.passed
        assert verdict.statistic == 0

    def test_constant_words_collide(self) -> None:
        verdict = t0_disjointness(np.zeros(T0_BITS, dtype=np.uint8))
        assert not verdict.passed
        assert verdict.details["distinct"] == 1


class TestProcedures:
    def test_procedure_a_short_input(self) -> None:
        verdicts = procedure_a(_random_bits(100_000))
        assert [v.name for v in verdicts] == ["T0", "T1", "T2", "T3", "T4", "T5"]
        assert all(v.details.get("insufficient_data") for v in verdicts)
        assert not any(v.passed for v in verdicts)

    def test_procedure_b_short_input(self) -> None:
        verdicts, used = procedure_b(_random_bits(50_000))
        assert [v.name for v in verdicts] == ["T6", "T7", "T8"]
        assert all(v.statistic is None for v in verdicts)
        assert used == 0

    def test_t6_random(self) -> None:
        verdict, used = t6_uniform(_random_bits(700_000))
        assert verdict.passed
        assert 100_000 + 2 * 200_000 <= used <= 700_000

    def test_coron_random(self) -> None:
        f_c = coron_statistic(_random_bits((2560 + 256_000) * 8))
        assert 7.976 <= f_c < 8.0

    def test_coron_biased_fails(self) -> None:
        bits = (np.random.default_rng(1).random((2560 + 256_000) * 8) < 0.3).astype(np.uint8)
        assert coron_statistic(bits) < 7.976

    def test_coron_needs_data(self) -> None:
        with pytest.raises(InsufficientDataError):
            coron_statistic(_random_bits(1000))
