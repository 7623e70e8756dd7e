"""Full-scale statistical checks of the generator output.

These take tens of minutes. Run with: SOFTSPONGE_ACCEPTANCE=1 pytest -m acceptance -s
"""

from __future__ import annotations

import os

import numpy as np
import pytest

from softsponge.config import RunConfig
from softsponge.experiments import cell_label, experiment_pcc, experiment_rc_tcc
from softsponge.pipeline import bootstrap_nonces, run_trng
from softsponge.stats import (
    BitSequence,
    ais31_suite,
    estimator_suite,
    iid_permutation_suite,
    nonce_quality,
)

pytestmark = [
    pytest.mark.acceptance,
    pytest.mark.skipif(
        os.environ.get("SOFTSPONGE_ACCEPTANCE") != "1",
        reason="set SOFTSPONGE_ACCEPTANCE=1 for full-scale checks",
    ),
]

TEN_MBYTE_BITS = 80_000_000


@pytest.fixture(scope="module")
def ten_mbyte() -> BitSequence:
    report = run_trng(RunConfig(bits=TEN_MBYTE_BITS), keep_bits=True)
    assert report.bits is not None
    assert report.sign_imbalance <= 0.002
    return BitSequence.from_bits(report.bits)


class TestCorrelationAblation:
    def test_chained_bound_and_unchained_peak(self) -> None:
        experiment = experiment_pcc(RunConfig())
        print(
            f"\n  max |PCC| chained {experiment.chained.max_abs_r:.4f}, "
            f"unchained {experiment.unchained.max_abs_r:.4f}"
        )
        assert experiment.chained.pairs >= 100_000
        assert experiment.chained.max_abs_r <= 0.15
        assert experiment.unchained.max_abs_r >= 0.99
        assert experiment.uniformity.passed
        assert experiment.sign_balance["imbalance"] <= 0.002
        assert experiment.containment_violations == 0


class TestStatisticalQuality:
    def test_ais31(self, ten_mbyte: BitSequence) -> None:
        verdicts = ais31_suite(ten_mbyte)
        for v in verdicts:
            # T6 and T7 carry per-part dicts
            print(f"\n  {v.to_dict()}")
        assert [v.name for v in verdicts] == [f"T{i}" for i in range(9)]
        assert all(v.passed for v in verdicts)
        assert next(v for v in verdicts if v.name == "T8").statistic >= 7.976

    def test_min_entropy(self, ten_mbyte: BitSequence) -> None:
        estimates = estimator_suite(ten_mbyte)
        print(f"\n  {estimates}")
        assert estimates["mcv"] >= 0.995
        assert estimates["markov"] >= 0.995
        assert estimates["collision"] >= 0.93
        assert estimates["compression"] >= 0.93

    def test_balanced(self, ten_mbyte: BitSequence) -> None:
        assert abs(float(np.mean(ten_mbyte.bits)) - 0.5) < 0.001

    def test_iid_permutations(self, ten_mbyte: BitSequence) -> None:
        report = iid_permutation_suite(ten_mbyte.slice(0, 1_000_000), permutations=1000, seed=3)
        print(f"\n  {report.families()}")
        assert len(report.families()) == 11
        assert report.passed


class TestNonceQuality:
    def test_concatenated_nonces(self) -> None:
        # 294 boot-straps give 100,254 bits
        nonces = bootstrap_nonces(RunConfig(), 294)
        seq = BitSequence.from_bits(np.concatenate([n.bits for n in nonces])[:100_000])
        verdicts = nonce_quality(seq, alpha=0.01)
        for v in verdicts:
            print(f"\n  {v.to_dict()}")
        assert all(v.passed for v in verdicts)


class TestRcTccAblation:
    def test_randomization_does_not_hurt(self) -> None:
        experiment = experiment_rc_tcc(RunConfig(bits=8_000_000), boards=range(1, 6))
        medians = experiment.medians()
        print(f"\n  {medians}")
        assert len({r["device_seed"] for r in experiment.rows}) == 5
        assert all(r["minimum"] >= 0.90 for r in experiment.rows)
        assert medians[cell_label(True, True)] >= medians[cell_label(False, False)] - 0.01
