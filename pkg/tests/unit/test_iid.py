"""Tests for the IID permutation suite."""

from __future__ import annotations

import numpy as np
import pytest

from softsponge.exceptions import InsufficientDataError, ValidationError
from softsponge.stats import BitSequence, iid_permutation_suite
from softsponge.stats.iid import STATISTIC_NAMES, compute_statistics
from softsponge.stats.thresholds import iid_fails


def _random_seq(count: int = 4000, seed: int = 6) -> BitSequence:
    return BitSequence(np.random.default_rng(seed).integers(0, 2, count, dtype=np.uint8))


class TestStatistics:
    def test_count(self) -> None:
        assert len(STATISTIC_NAMES) == 19
        assert compute_statistics(_random_seq().bits).shape == (19,)

    def test_median_runs_of_alternating(self) -> None:
        bits = np.tile(np.array([0, 1], dtype=np.uint8), 500)
        stats = dict(zip(STATISTIC_NAMES, compute_statistics(bits), strict=True))
        assert stats["median_runs"] == 1000
        assert stats["longest_median_run"] == 1

    def test_collision_of_constant_bytes(self) -> None:
        stats = dict(
            zip(STATISTIC_NAMES, compute_statistics(np.zeros(800, np.uint8)), strict=True)
        )
        assert stats["average_collision"] == 2
        assert stats["maximum_collision"] == 2


class TestDecisionRule:
    @pytest.mark.parametrize(
        ("c0", "c1", "fails"),
        [(0, 5, True), (0, 6, False), (9995, 0, True), (9994, 0, False), (5000, 10, False)],
        ids=["low-edge", "above-low", "high-edge", "below-high", "middle"],
    )
    def test_iid_fails(self, c0: int, c1: int, fails: bool) -> None:
        assert iid_fails(c0, c1, 10_000) is fails


class TestPermutationSuite:
    def test_report_shape(self) -> None:
        report = iid_permutation_suite(_random_seq(), permutations=100, seed=1)
        assert len(report.statistics) == 19
        assert report.bits == 4000
        assert set(report.families()) == {
            "excursion",
            "directional_runs",
            "longest_directional_run",
            "increases_decreases",
            "median_runs",
            "longest_median_run",
            "average_collision",
            "maximum_collision",
            "periodicity",
            "covariance",
            "compression",
        }
        for stat in report.statistics:
            assert 0 <= stat.c0 + stat.c1 <= 100

    def test_seeded(self) -> None:
        a = iid_permutation_suite(_random_seq(), permutations=120, seed=3)
        b = iid_permutation_suite(_random_seq(), permutations=120, seed=3)
        assert [s.to_dict() for s in a.statistics] == [s.to_dict() for s in b.statistics]

    def test_worker_count_does_not_change_counters(self) -> None:
        a = iid_permutation_suite(_random_seq(), permutations=100, seed=5, workers=1)
        b = iid_permutation_suite(_random_seq(), permutations=100, seed=5, workers=2)
        assert [(s.c0, s.c1) for s in a.statistics] == [(s.c0, s.c1) for s in b.statistics]

    def test_alternating_input_fails(self) -> None:
        seq = BitSequence(np.tile(np.array([0, 1], dtype=np.uint8), 2000))
        report = iid_permutation_suite(seq, permutations=100)
        assert not report.families()["median_runs"]
        assert not report.passed

    def test_constant_input_flagged(self) -> None:
        report = iid_permutation_suite(BitSequence(np.zeros(1000, np.uint8)), permutations=100)
        assert report.constant_input
        assert not report.passed
        assert all(s.c1 == 100 for s in report.statistics)
        assert report.notes

    def test_too_few_permutations(self) -> None:
        with pytest.raises(ValidationError):
            iid_permutation_suite(_random_seq(), permutations=99)

    def test_too_short(self) -> None:
        with pytest.raises(InsufficientDataError):
            iid_permutation_suite(_random_seq(100), permutations=100)

    def test_to_dict(self) -> None:
        d = iid_permutation_suite(_random_seq(), permutations=100).to_dict()
        assert d["permutations"] == 100
        assert len(d["statistics"]) == 19
        assert {"C0", "C1", "passed"} <= set(d["statistics"][0])
