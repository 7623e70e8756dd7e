"""Raw bit streams and DVD_cs trace files.

Bits are packed MSB-first with no header, the layout external suites expect on stdin.
Trace records are a little-endian ``(iteration, rc, tcc)`` uint16 header followed by
2048 int16 raw fixed-point DVD_cs values.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from pathlib import Path
from types import TracebackType
from typing import BinaryIO

import numpy as np

from .constants import SET_SIZE
from .exceptions import BitIOError, PipeClosedError, ValidationError
from .logging_config import create_logger
from .nonce import IterationParams

logger = create_logger(__name__)

STDOUT = "-"

TRACE_DTYPE = np.dtype(
    [
        ("iteration", "<u2"),
        ("rc", "<u2"),
        ("tcc", "<u2"),
        ("values", "<i2", (SET_SIZE,)),
    ]
)


def pack_bits(bits: np.ndarray) -> bytes:
    """Pack 0/1 values MSB-first; a trailing partial byte is zero-padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="big").tobytes()


def _silence_stdout() -> None:
    # the interpreter flushes stdout again at exit and would hit the dead pipe
    try:
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
    except (OSError, ValueError):
        pass


class BitSink:
    """Write packed bits to a file or to stdout, flushing after every chunk."""

    def __init__(self, target: str | Path):
        self.target = str(target)
        self.bytes_written = 0
        self._stream: BinaryIO | None = None
        self._owned = False

    def __enter__(self) -> BitSink:
        if self.target == STDOUT:
            self._stream = sys.stdout.buffer
        else:
            try:
                self._stream = open(self.target, "wb")  # noqa: SIM115
            except OSError as e:
                raise BitIOError(f"cannot open output: {e}", path=self.target) from e
            self._owned = True
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if self._stream is not None and self._owned:
            self._stream.close()
        self._stream = None

    def write(self, bits: np.ndarray) -> int:
        """Pack and write; returns bytes written.

        Raises:
            PipeClosedError: If the stdout reader went away.
            BitIOError: On any other write failure.
        """
        if self._stream is None:
            raise BitIOError("sink is not open", path=self.target)
        data = pack_bits(bits)
        try:
            self._stream.write(data)
            self._stream.flush()
        except BrokenPipeError as e:
            _silence_stdout()
            raise PipeClosedError() from e
        except OSError as e:
            raise BitIOError(f"write failed: {e}", path=self.target) from e
        self.bytes_written += len(data)
        return len(data)


def emit_bits(bits: np.ndarray, target: str | Path = STDOUT) -> int:
    """Write one bit array to ``target`` (``-`` for stdout); returns bytes written."""
    with BitSink(target) as sink:
        return sink.write(bits)


# ── traces ──


class TraceWriter:
    """Sponge trace hook that appends one binary record per iteration."""

    def __init__(self, path: str | Path):
        self.path = str(path)
        self.records = 0
        self._stream: BinaryIO | None = None

    def __enter__(self) -> TraceWriter:
        try:
            self._stream = open(self.path, "wb")  # noqa: SIM115
        except OSError as e:
            raise BitIOError(f"cannot open trace file: {e}", path=self.path) from e
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if self._stream is not None:
            self._stream.close()
            self._stream = None
        logger.debug(f"wrote {self.records} trace records to {self.path}")

    def __call__(
        self, iteration: int, params: IterationParams, dvd_cs: np.ndarray, sf: np.ndarray
    ) -> None:
        if self._stream is None:
            raise BitIOError("trace writer is not open", path=self.path)
        if dvd_cs.size and (dvd_cs.min() < -32768 or dvd_cs.max() > 32767):
            raise ValidationError("DVD_cs values exceed the int16 trace format", field="dvd_cs")
        record = np.zeros(1, dtype=TRACE_DTYPE)
        record["iteration"] = iteration
        record["rc"] = params.rc
        record["tcc"] = params.tcc
        record["values"][0] = dvd_cs
        try:
            self._stream.write(record.tobytes())
        except OSError as e:
            raise BitIOError(f"trace write failed: {e}", path=self.path) from e
        self.records += 1


@dataclass
class Trace:
    """Records loaded from a trace file."""

    iterations: np.ndarray
    rc: np.ndarray
    tcc: np.ndarray
    values: np.ndarray  # K x 2048 raw fixed point

    def __len__(self) -> int:
        return int(self.iterations.size)

    def by_tcc(self) -> dict[int, np.ndarray]:
        """Values grouped by the TCC they were folded with."""
        return {int(t): self.values[self.tcc == t].ravel() for t in np.unique(self.tcc)}


def read_trace(path: str | Path) -> Trace:
    """Load a trace file written by ``TraceWriter``."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise BitIOError(f"cannot read trace file: {e}", path=str(path)) from e
    if len(data) % TRACE_DTYPE.itemsize:
        raise BitIOError(
            f"trace size {len(data)} is not a multiple of the {TRACE_DTYPE.itemsize}-byte record",
            path=str(path),
        )
    records = np.frombuffer(data, dtype=TRACE_DTYPE)
    return Trace(
        iterations=records["iteration"].astype(np.int64),
        rc=records["rc"].astype(np.int64),
        tcc=records["tcc"].astype(np.int64),
        values=records["values"].astype(np.int64),
    )
