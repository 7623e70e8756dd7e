"""Tests for device fingerprints, TDC digitization and the timing phase."""

from __future__ import annotations

import numpy as np
import pytest

from softsponge.constants import CHALLENGES_PER_PHASE, SET_SIZE, TDC_MAX
from softsponge.entropy import (
    EnvCondition,
    Geometry,
    NoiseModel,
    build_device,
    device_from_dict,
    measure_path,
    nominal_counts,
    segment_indices,
    timing_phase,
)
from softsponge.exceptions import InvalidGeometryError, ValidationError
from softsponge.sequence import Challenge, challenge_schedule, lfsr64_seed


def _make_challenges(seed: int = 1) -> list[Challenge]:
    challenges, _ = challenge_schedule(lfsr64_seed(seed))
    return challenges


def _quiet() -> NoiseModel:
    return NoiseModel(sigma=0.0, noise_seed=0)


class TestGeometry:
    def test_defaults(self) -> None:
        g = Geometry()
        assert g.stages == 6
        assert g.selector_space == 80**6

    @pytest.mark.parametrize(
        "geometry",
        [Geometry(rows=0), Geometry(cols=0), Geometry(segments_per_stage=0)],
        ids=["rows", "cols", "segments"],
    )
    def test_zero_counts_rejected(self, geometry: Geometry) -> None:
        with pytest.raises(InvalidGeometryError):
            build_device(1, geometry)

    def test_challenge_overflow_rejected(self) -> None:
        # 128**10 selections do not fit beside the edge bit
        with pytest.raises(InvalidGeometryError):
            build_device(1, Geometry(rows=5, cols=2, segments_per_stage=128))

    def test_single_segment_geometry(self) -> None:
        device = build_device(1, Geometry(rows=1, cols=1, segments_per_stage=1))
        assert device.segment_delays.shape == (2, 1, 1)


class TestDevice:
    def test_table_shape(self) -> None:
        device = build_device(3)
        assert device.segment_delays.shape == (2, 6, 80)

    def test_deterministic(self) -> None:
        a, b = build_device(11), build_device(11)
        assert np.array_equal(a.segment_delays, b.segment_delays)
        assert a.gain == b.gain

    def test_devices_differ(self) -> None:
        assert not np.array_equal(build_device(1).segment_delays, build_device(2).segment_delays)

    def test_table_is_read_only(self) -> None:
        with pytest.raises(ValueError):
            build_device(1).segment_delays[0, 0, 0] = 0.0

    def test_round_trip_through_dict(self) -> None:
        device = build_device(5)
        rebuilt = device_from_dict(device.to_dict())
        assert np.array_equal(device.segment_delays, rebuilt.segment_delays)

    def test_nominal_counts_within_calibration(self) -> None:
        device = build_device(9)
        words = np.random.default_rng(0).integers(0, 2**63, size=5000, dtype=np.uint64)
        paths = np.arange(words.size) % 32
        counts = nominal_counts(device, words, paths)
        assert counts.min() >= 300.0 - 1e-6
        assert counts.max() <= 1000.0 + 1e-6

    def test_segment_indices_fields(self) -> None:
        g = Geometry()
        # edge 1, stage 0 digit 3, stage 1 digit 5
        word = 1 | ((3 + 5 * 80) << 1)
        edge, idx = segment_indices(g, np.array([word], dtype=np.uint64), 0)
        assert edge[0] == 1
        assert idx[0, 0] == 3
        assert idx[0, 1] == 5

    def test_stage_selection_uniform(self) -> None:
        g = Geometry()
        words = np.random.default_rng(3).integers(0, 2**63, size=80_000, dtype=np.uint64)
        _, idx = segment_indices(g, words << np.uint64(1), 0)
        for stage in range(g.stages - 1):
            counts = np.bincount(idx[:, stage], minlength=g.segments_per_stage)
            # expected 1000 per segment
            assert counts.min() > 800
            assert counts.max() < 1200

    @pytest.mark.parametrize("device_seed", range(1, 9))
    def test_dv_span_covers_calibration(self, device_seed: int) -> None:
        device = build_device(device_seed)
        challenges = _make_challenges(device_seed)
        record = timing_phase(device, challenges, EnvCondition(), _quiet().stream())
        assert int(record.dv_a.max()) - int(record.dv_a.min()) >= 300
        assert int(record.dv_b.max()) - int(record.dv_b.min()) >= 300

    def test_path_offsets_last_stage_only(self) -> None:
        g = Geometry()
        words = np.array([12345, 12345], dtype=np.uint64)
        _, idx = segment_indices(g, words, np.array([0, 4]))
        assert np.array_equal(idx[0, :-1], idx[1, :-1])
        assert (idx[1, -1] - idx[0, -1]) % g.segments_per_stage == 4


class TestEnvCondition:
    def test_identity(self) -> None:
        assert EnvCondition().is_identity
        assert not EnvCondition(temp_offset=1.0).is_identity

    @pytest.mark.parametrize("scale", [0.0, -1.0], ids=["zero", "negative"])
    def test_supply_scale_must_be_positive(self, scale: float) -> None:
        with pytest.raises(ValidationError):
            EnvCondition(supply_scale=scale)


class TestMeasurePath:
    def test_noise_free_rounds_nominal(self) -> None:
        device = build_device(4)
        challenge = _make_challenges()[0]
        expected = np.floor(
            nominal_counts(device, np.array([challenge.word], dtype=np.uint64), 3)[0] + 0.5
        )
        value = measure_path(device, challenge, 3, EnvCondition(), _quiet().stream())
        assert value == int(expected)

    def test_integer_offset_shifts_exactly(self) -> None:
        device = build_device(4)
        challenge = _make_challenges()[1]
        base = measure_path(device, challenge, 7, EnvCondition(), NoiseModel(1.0, 3).stream())
        shifted = measure_path(
            device, challenge, 7, EnvCondition(temp_offset=20.0), NoiseModel(1.0, 3).stream()
        )
        assert shifted - base == 20

    @pytest.mark.parametrize("path_idx", [-1, 32], ids=["negative", "too-large"])
    def test_path_index_checked(self, path_idx: int) -> None:
        with pytest.raises(ValidationError):
            measure_path(
                build_device(1), Challenge(1), path_idx, EnvCondition(), _quiet().stream()
            )


class TestTimingPhase:
    def test_record_layout(self) -> None:
        record = timing_phase(
            build_device(1), _make_challenges(), EnvCondition(), NoiseModel().stream()
        )
        assert record.dv_a.shape == (SET_SIZE,)
        assert record.dv_b.shape == (SET_SIZE,)
        assert np.array_equal(record.lsb_stream, (record.all_dvs & 1).astype(np.uint8))
        assert record.clamp_events == 0

    def test_measurement_order(self) -> None:
        device = build_device(2)
        challenges = _make_challenges()
        record = timing_phase(device, challenges, EnvCondition(), _quiet().stream())
        # measurement 33 is path 1 of challenge 1
        expected = measure_path(device, challenges[1], 1, EnvCondition(), _quiet().stream())
        assert record.dv_a[33] == expected

    def test_noise_stream_continues(self) -> None:
        device = build_device(1)
        stream = NoiseModel(1.0, 8).stream()
        first = timing_phase(device, _make_challenges(), EnvCondition(), stream)
        second = timing_phase(device, _make_challenges(), EnvCondition(), stream)
        assert stream.draws == 2 * 2 * SET_SIZE
        assert not np.array_equal(first.dv_a, second.dv_a)

    def test_same_seed_reproduces(self) -> None:
        device = build_device(1)
        a = timing_phase(device, _make_challenges(), EnvCondition(), NoiseModel(1.0, 8).stream())
        b = timing_phase(device, _make_challenges(), EnvCondition(), NoiseModel(1.0, 8).stream())
        assert np.array_equal(a.all_dvs, b.all_dvs)

    def test_saturation_counted(self) -> None:
        stream = _quiet().stream()
        record = timing_phase(
            build_device(1), _make_challenges(), EnvCondition(supply_scale=10.0), stream
        )
        assert int(record.all_dvs.max()) == TDC_MAX
        assert record.clamp_events > 0
        assert stream.clamp_events == record.clamp_events

    def test_wrong_challenge_count(self) -> None:
        with pytest.raises(ValidationError):
            timing_phase(
                build_device(1),
                _make_challenges()[: CHALLENGES_PER_PHASE - 1],
                EnvCondition(),
                _quiet().stream(),
            )


class TestNoise:
    def test_repeated_measurement_spread(self) -> None:
        device = build_device(6)
        challenge = _make_challenges()[2]
        stream = NoiseModel(1.0, 21).stream()
        values = np.array(
            [measure_path(device, challenge, 5, EnvCondition(), stream) for _ in range(10_000)]
        )
        assert 0.9 <= float(values.std()) <= 1.1

    def test_lsb_roughly_balanced(self) -> None:
        record = timing_phase(
            build_device(2), _make_challenges(), EnvCondition(), NoiseModel(1.0, 4).stream()
        )
        assert record.lsb_stream.size == 2 * SET_SIZE
        assert 0.40 <= float(record.lsb_stream.mean()) <= 0.60
