"""Integration tests for the generator cycle: timing phases, sponge and bit output."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from softsponge.bitio import TRACE_DTYPE, BitSink, read_trace
from softsponge.config import RunConfig
from softsponge.constants import BITS_PER_CYCLE, FIXED_ONE, ITERATIONS_PER_CYCLE, SET_SIZE
from softsponge.exceptions import DegenerateRangeError
from softsponge.pipeline import TrngPipeline, bootstrap_nonces, cycles_for, run_trng
from softsponge.stats import BitSequence


@pytest.fixture(scope="module")
def one_cycle() -> np.ndarray:
    report = run_trng(RunConfig(bits=1), keep_bits=True)
    assert report.bits is not None
    return report.bits


class TestCyclesFor:
    @pytest.mark.parametrize(
        ("bits", "expected"),
        [(0, 1), (1, 1), (BITS_PER_CYCLE, 1), (BITS_PER_CYCLE + 1, 2), (80_000_000, 20)],
    )
    def test_whole_cycles(self, bits: int, expected: int) -> None:
        assert cycles_for(bits) == expected


class TestTrngPipeline:
    def test_prepare_shapes(self) -> None:
        cycle = TrngPipeline(RunConfig()).prepare()
        assert cycle.timing.dv_a.size == SET_SIZE
        assert cycle.timing.dv_b.size == SET_SIZE
        assert set(cycle.seconds) == {"bootstrap", "timing"}

    def test_bootstrap_nonces_vary_with_noise(self) -> None:
        pipeline = TrngPipeline(RunConfig())
        assert pipeline.bootstrap() != pipeline.bootstrap()

    def test_noiseless_bootstrap_repeats(self) -> None:
        pipeline = TrngPipeline(RunConfig(noise_sigma=0.0))
        assert pipeline.bootstrap() == pipeline.bootstrap()

    def test_zero_toggle_carried(self) -> None:
        pipeline = TrngPipeline(RunConfig())
        outputs = list(pipeline.cycles(1))
        assert pipeline.zero_toggle == outputs[-1].result.state.zero_toggle
        assert set(outputs[0].seconds) == {"bootstrap", "timing", "sponge"}


class TestRunTrng:
    def test_one_cycle_bit_count(self, one_cycle: np.ndarray) -> None:
        assert one_cycle.size == BITS_PER_CYCLE
        assert set(np.unique(one_cycle).tolist()) <= {0, 1}

    def test_roughly_balanced(self, one_cycle: np.ndarray) -> None:
        assert abs(one_cycle.mean() - 0.5) < 0.01

    def test_deterministic(self, one_cycle: np.ndarray) -> None:
        again = run_trng(RunConfig(bits=1), keep_bits=True)
        assert again.bits is not None
        assert np.array_equal(again.bits, one_cycle)

    def test_noise_seed_changes_output(self, one_cycle: np.ndarray) -> None:
        other = run_trng(RunConfig(bits=1, noise_seed=99), keep_bits=True)
        assert other.bits is not None
        assert 0.45 < np.count_nonzero(other.bits != one_cycle) / one_cycle.size < 0.55

    def test_report(self) -> None:
        report = run_trng(RunConfig(bits=1))
        d = report.to_dict()
        assert d["bits_emitted"] == BITS_PER_CYCLE
        assert d["cycles"] == 1
        assert d["bytes_written"] == 0
        assert d["signs"]["positive"] + d["signs"]["negative"] + d["signs"]["zero"] == (
            BITS_PER_CYCLE
        )
        assert d["signs"]["imbalance"] < 0.01
        assert len(d["nonces"]) == 1
        assert d["health"]["degenerate_range_events"] == 0
        assert report.bits is None

    def test_writes_file(self, tmp_path: Path, one_cycle: np.ndarray) -> None:
        out = tmp_path / "bits.bin"
        report = run_trng(RunConfig(bits=1, out=str(out)))
        assert report.bytes_written == BITS_PER_CYCLE // 8 == out.stat().st_size
        assert np.array_equal(BitSequence.from_file(out).bits, one_cycle)

    def test_explicit_sink(self, tmp_path: Path) -> None:
        out = tmp_path / "bits.bin"
        with BitSink(out) as sink:
            report = run_trng(RunConfig(bits=1), sink=sink)
        assert report.bytes_written == out.stat().st_size

    def test_trace_file(self, tmp_path: Path) -> None:
        path = tmp_path / "trace.bin"
        run_trng(RunConfig(bits=1, trace_path=str(path)))
        assert path.stat().st_size == ITERATIONS_PER_CYCLE * TRACE_DTYPE.itemsize
        trace = read_trace(path)
        half = trace.tcc * FIXED_ONE // 2
        assert np.all(np.abs(trace.values) <= half[:, None])

    def test_saturated_source_is_degenerate(self) -> None:
        with pytest.raises(DegenerateRangeError) as exc:
            run_trng(RunConfig(temp_offset=4095.0))
        assert exc.value.exit_code == 3

    def test_fixed_parameters(self) -> None:
        config = replace(RunConfig(bits=1), rc_randomized=False, tcc_randomized=False)
        report = run_trng(config, keep_bits=True)
        assert report.bits is not None
        assert report.bits.size == BITS_PER_CYCLE


class TestBootstrapNonces:
    def test_count_and_width(self) -> None:
        nonces = bootstrap_nonces(RunConfig(), 3)
        assert len(nonces) == 3
        assert all(len(n.to_hex()) == 86 for n in nonces)
