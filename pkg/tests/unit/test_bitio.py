"""Tests for bit packing, bit files, trace files and report writers."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from softsponge.bitio import (
    TRACE_DTYPE,
    BitSink,
    TraceWriter,
    emit_bits,
    pack_bits,
    read_trace,
)
from softsponge.constants import SET_SIZE
from softsponge.exceptions import BitIOError, ValidationError
from softsponge.nonce import IterationParams
from softsponge.reports import (
    HISTOGRAM_HEADER,
    histogram_rows,
    sibling_path,
    to_json,
    write_csv,
    write_histogram,
    write_json,
)
from softsponge.stats import BitSequence


class TestPacking:
    def test_msb_first(self) -> None:
        assert pack_bits(np.array([0, 1, 1, 0, 0, 0, 0, 1])) == b"\x61"

    def test_partial_byte_padded(self) -> None:
        assert pack_bits(np.array([1])) == b"\x80"

    def test_file_round_trip(self, tmp_path: Path) -> None:
        bits = np.random.default_rng(0).integers(0, 2, 4096, dtype=np.uint8)
        path = tmp_path / "bits.bin"
        assert emit_bits(bits, path) == 512
        assert np.array_equal(BitSequence.from_file(path).bits, bits)
        assert len(BitSequence.from_file(path, length=10)) == 10

    def test_bit_sequence_reads_same_layout(self, tmp_path: Path) -> None:
        path = tmp_path / "bits.bin"
        path.write_bytes(b"\x61")
        seq = BitSequence.from_file(path)
        assert seq.bits.tolist() == [0, 1, 1, 0, 0, 0, 0, 1]
        assert seq.packed() == b"\x61"
        assert seq.ones == 3

    def test_bit_sequence_length_checked(self) -> None:
        with pytest.raises(ValidationError):
            BitSequence.from_bytes(b"\x00", length=9)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(BitIOError):
            BitSequence.from_file(tmp_path / "absent.bin")

    def test_empty_file(self, tmp_path: Path) -> None:
        path = tmp_path / "empty.bin"
        path.write_bytes(b"")
        with pytest.raises(BitIOError, match="empty"):
            BitSequence.from_file(path)


class TestBitSink:
    def test_counts_bytes(self, tmp_path: Path) -> None:
        path = tmp_path / "out.bin"
        with BitSink(path) as sink:
            sink.write(np.ones(16, dtype=np.uint8))
            sink.write(np.zeros(8, dtype=np.uint8))
        assert sink.bytes_written == 3
        assert path.read_bytes() == b"\xff\xff\x00"

    def test_write_requires_open(self, tmp_path: Path) -> None:
        with pytest.raises(BitIOError):
            BitSink(tmp_path / "out.bin").write(np.ones(8, dtype=np.uint8))

    def test_unwritable_target(self, tmp_path: Path) -> None:
        with pytest.raises(BitIOError), BitSink(tmp_path / "missing" / "out.bin"):
            pass


class TestTrace:
    def test_round_trip(self, tmp_path: Path) -> None:
        path = tmp_path / "trace.bin"
        values = np.arange(-1024, 1024, dtype=np.int64)
        with TraceWriter(path) as writer:
            writer(0, IterationParams(128, 8), values, values)
            writer(1, IterationParams(150, 20), -values, values)
        assert writer.records == 2
        assert path.stat().st_size == 2 * TRACE_DTYPE.itemsize

        trace = read_trace(path)
        assert len(trace) == 2
        assert trace.rc.tolist() == [128, 150]
        assert trace.tcc.tolist() == [8, 20]
        assert np.array_equal(trace.values[1], -values)
        assert set(trace.by_tcc()) == {8, 20}
        assert trace.by_tcc()[8].size == SET_SIZE

    def test_values_must_fit_int16(self, tmp_path: Path) -> None:
        with TraceWriter(tmp_path / "trace.bin") as writer, pytest.raises(ValidationError):
            writer(0, IterationParams(128, 8), np.full(SET_SIZE, 40_000), np.zeros(SET_SIZE))

    def test_truncated_file(self, tmp_path: Path) -> None:
        path = tmp_path / "trace.bin"
        path.write_bytes(b"\x00" * 10)
        with pytest.raises(BitIOError, match="multiple"):
            read_trace(path)


class TestReports:
    def test_json_handles_numpy(self, tmp_path: Path) -> None:
        data = {"n": np.int64(3), "x": np.float64(0.5), "ok": np.bool_(True), "a": np.arange(2)}
        path = write_json(tmp_path / "sub" / "report.json", data)
        assert json.loads(path.read_text()) == {"n": 3, "x": 0.5, "ok": True, "a": [0, 1]}
        assert json.loads(to_json({"p": Path("a")})) == {"p": "a"}

    def test_csv(self, tmp_path: Path) -> None:
        path = write_csv(tmp_path / "t.csv", ("a", "b"), [(1, 2), (3, 4)])
        with path.open() as fh:
            assert list(csv.reader(fh)) == [["a", "b"], ["1", "2"], ["3", "4"]]

    def test_histogram_rows(self) -> None:
        rows = histogram_rows(np.array([0.1, 0.2, 0.9]), bins=2, value_range=(0.0, 1.0))
        assert rows == [(0.0, 0.5, 2), (0.5, 1.0, 1)]

    def test_write_histogram(self, tmp_path: Path) -> None:
        path = write_histogram(tmp_path / "h.csv", np.arange(10), bins=5)
        with path.open() as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == HISTOGRAM_HEADER
        assert len(rows) == 6

    def test_write_histogram_needs_input(self, tmp_path: Path) -> None:
        with pytest.raises(ValueError):
            write_histogram(tmp_path / "h.csv")

    @pytest.mark.parametrize(
        ("report", "expected"),
        [("out/run.json", Path("out/run_pcc.csv")), (None, Path("./softsponge_pcc.csv"))],
        ids=["next-to-report", "default"],
    )
    def test_sibling_path(self, report: str | None, expected: Path) -> None:
        assert sibling_path(report, "pcc.csv") == expected
