"""JSON reports and CSV histograms."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import BitIOError
from .logging_config import create_logger

logger = create_logger(__name__)

HISTOGRAM_HEADER = ("bin_left", "bin_right", "count")


def _default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    return str(value)


def to_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, default=_default, sort_keys=False)


def write_json(path: str | Path, data: dict[str, Any]) -> Path:
    """Write a report; parent directories are created."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(to_json(data) + "\n", encoding="utf-8")
    except OSError as e:
        raise BitIOError(f"cannot write report: {e}", path=str(target)) from e
    logger.info(f"report written to {target}")
    return target


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise BitIOError(f"cannot write CSV: {e}", path=str(target)) from e
    logger.debug(f"CSV written to {target}")
    return target


def histogram_rows(
    values: np.ndarray, bins: int, value_range: tuple[float, float] | None = None
) -> list[tuple[float, float, int]]:
    """(bin_left, bin_right, count) rows of an equal-width histogram."""
    counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins, range=value_range)
    return [(float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)]


def write_histogram(
    path: str | Path,
    values: np.ndarray | None = None,
    bins: int = 64,
    value_range: tuple[float, float] | None = None,
    rows: list[tuple[float, float, int]] | None = None,
) -> Path:
    """Write a histogram CSV from raw values or precomputed rows."""
    if rows is None:
        if values is None:
            raise ValueError("either values or rows is required")
        rows = histogram_rows(values, bins, value_range)
    return write_csv(path, HISTOGRAM_HEADER, rows)


def sibling_path(report_path: str | Path | None, suffix: str, default_dir: str = ".") -> Path:
    """Companion file next to a report: ``<stem>_<suffix>``."""
    if report_path is None:
        return Path(default_dir) / f"softsponge_{suffix}"
    base = Path(report_path)
    return base.with_name(f"{base.stem}_{suffix}")
