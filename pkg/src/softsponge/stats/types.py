"""Result and input types of the certification suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..exceptions import BitIOError, ValidationError


@dataclass(frozen=True, eq=False)
class BitSequence:
    """A bit string under test.

    ``bits`` holds one 0/1 value per element; ``packed()`` yields the MSB-first byte form the
    sponge emits, so a file written by ``run`` reads back bit for bit.
    """

    bits: np.ndarray

    def __post_init__(self) -> None:
        if self.bits.ndim != 1 or self.bits.size == 0:
            raise ValidationError("a bit sequence needs at least one bit", field="bits")
        self.bits.setflags(write=False)

    def __len__(self) -> int:
        return int(self.bits.size)

    @classmethod
    def from_bits(cls, bits: np.ndarray | list[int]) -> BitSequence:
        return cls(np.asarray(bits, dtype=np.uint8) & 1)

    @classmethod
    def from_bytes(cls, data: bytes, length: int | None = None) -> BitSequence:
        """Unpack MSB-first bytes, optionally truncated to ``length`` bits."""
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="big")
        if length is not None:
            if length > bits.size:
                raise ValidationError(
                    f"requested {length} bits but only {bits.size} are available", field="length"
                )
            bits = bits[:length]
        return cls(bits)

    @classmethod
    def from_file(cls, path: str | Path, length: int | None = None) -> BitSequence:
        try:
            data = Path(path).read_bytes()
        except OSError as e:
            raise BitIOError(f"cannot read bit file: {e}", path=str(path)) from e
        if not data:
            raise BitIOError("bit file is empty", path=str(path))
        return cls.from_bytes(data, length)

    @property
    def ones(self) -> int:
        return int(np.count_nonzero(self.bits))

    def packed(self) -> bytes:
        return np.packbits(self.bits, bitorder="big").tobytes()

    def slice(self, start: int, stop: int) -> BitSequence:
        return BitSequence(self.bits[start:stop])


@dataclass(frozen=True)
class TestVerdict:
    """Outcome of one statistical test against its threshold."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    statistic: float | dict[str, float] | None
    threshold: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "passed": self.passed,
            **self.details,
        }


@dataclass
class PccReport:
    """Summary of a Pearson correlation scan over DVD_cs sets."""

    sets: int
    pairs: int
    max_abs_r: float
    max_pair: tuple[int, int] | None
    histogram: np.ndarray  # counts over PCC_HISTOGRAM_BINS equal bins of [-1, 1]
    high_pairs: list[tuple[int, int, float]] = field(default_factory=list)
    degenerate_sets: int = 0
    sampling: str = "all"

    @property
    def bin_edges(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.histogram.size + 1)

    def histogram_rows(self) -> list[tuple[float, float, int]]:
        """(bin_left, bin_right, count) rows for CSV export."""
        edges = self.bin_edges
        return [
            (float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(self.histogram)
        ]

    def to_dict(self, max_high_pairs: int = 100) -> dict[str, Any]:
        return {
            "sets": self.sets,
            "pairs": self.pairs,
            "sampling": self.sampling,
            "max_abs_r": round(self.max_abs_r, 6),
            "max_pair": list(self.max_pair) if self.max_pair else None,
            "degenerate_sets": self.degenerate_sets,
            "high_pair_count": len(self.high_pairs),
            "high_pairs": [
                {"a": a, "b": b, "r": round(r, 6)} for a, b, r in self.high_pairs[:max_high_pairs]
            ],
        }
