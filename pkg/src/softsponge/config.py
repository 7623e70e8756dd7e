"""Run configuration: a flat ``key = value`` file plus CLI overrides.

Every key mirrors a ``RunConfig`` field. ``rc`` and ``tcc`` are shorthands taking ``rand`` or
an integer, which toggles the matching ``*_randomized`` flag and sets the fixed value.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any

from .constants import (
    BITS_PER_CYCLE,
    CI_PERMUTATIONS,
    DEFAULT_COLS,
    DEFAULT_FIXED_RC,
    DEFAULT_FIXED_TCC,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_ROWS,
    DEFAULT_SEGMENTS_PER_STAGE,
)
from .entropy.types import EnvCondition, Geometry, NoiseModel
from .exceptions import ConfigError
from .logging_config import create_logger
from .sponge.core import GpevBounds
from .stats.correlation import Sampling
from .validation import (
    ValidationResult,
    validate_choice,
    validate_count,
    validate_flag,
    validate_rc,
    validate_seed,
    validate_sigma,
    validate_supply_scale,
    validate_tcc,
    validate_temp_offset,
)

logger = create_logger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines one run's output."""

    device_seed: int = 1
    noise_seed: int = 1
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    temp_offset: float = 0.0
    supply_scale: float = 1.0
    chaining_enabled: bool = True
    rc_randomized: bool = True
    tcc_randomized: bool = True
    fixed_rc: int = DEFAULT_FIXED_RC
    fixed_tcc: int = DEFAULT_FIXED_TCC
    gpev_bounds: GpevBounds = "symmetric"
    rows: int = DEFAULT_ROWS
    cols: int = DEFAULT_COLS
    segments_per_stage: int = DEFAULT_SEGMENTS_PER_STAGE
    bits: int = BITS_PER_CYCLE
    out: str | None = None
    permutations: int = CI_PERMUTATIONS
    perm_seed: int = 0
    pcc_sampling: Sampling = "auto"
    workers: int = 1
    report_path: str | None = None
    trace_path: str | None = None
    config_path: str | None = None

    @property
    def env(self) -> EnvCondition:
        return EnvCondition(self.temp_offset, self.supply_scale)

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.rows, self.cols, self.segments_per_stage)

    @property
    def noise(self) -> NoiseModel:
        return NoiseModel(self.noise_sigma, self.noise_seed)

    @property
    def rc_override(self) -> int | None:
        return None if self.rc_randomized else self.fixed_rc

    @property
    def tcc_override(self) -> int | None:
        return None if self.tcc_randomized else self.fixed_tcc

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _optional_path(value: Any, name: str) -> ValidationResult:
    text = str(value).strip()
    return ValidationResult.success(text or None)


def _pcc_sampling(value: Any, name: str) -> ValidationResult:
    text = str(value).strip().lower()
    if text in ("auto", "all"):
        return ValidationResult.success(text)
    return validate_count(text, name)


def _bounds(value: Any, name: str) -> ValidationResult:
    return validate_choice(value, name, ("symmetric", "literal"))


_VALIDATORS: dict[str, Callable[[Any, str], ValidationResult]] = {
    "device_seed": validate_seed,
    "noise_seed": validate_seed,
    "noise_sigma": validate_sigma,
    "temp_offset": validate_temp_offset,
    "supply_scale": validate_supply_scale,
    "chaining_enabled": validate_flag,
    "rc_randomized": validate_flag,
    "tcc_randomized": validate_flag,
    "fixed_rc": validate_rc,
    "fixed_tcc": validate_tcc,
    "gpev_bounds": _bounds,
    "rows": validate_count,
    "cols": validate_count,
    "segments_per_stage": validate_count,
    "bits": validate_count,
    "out": _optional_path,
    "permutations": lambda v, n: validate_count(v, n, min_value=100),
    "perm_seed": validate_seed,
    "pcc_sampling": _pcc_sampling,
    "workers": lambda v, n: validate_count(v, n, max_value=256),
    "report_path": _optional_path,
    "trace_path": _optional_path,
    "config_path": _optional_path,
}


def _expand_param(key: str, value: Any) -> dict[str, Any]:
    """Turn ``rc``/``tcc`` shorthands into their flag and fixed-value fields."""
    text = str(value).strip().lower()
    if text in ("rand", "random"):
        return {f"{key}_randomized": True}
    return {f"{key}_randomized": False, f"fixed_{key}": value}


def _validated(changes: Mapping[str, Any]) -> dict[str, Any]:
    expanded: dict[str, Any] = {}
    for key, value in changes.items():
        if value is None:
            continue
        if key in ("rc", "tcc"):
            expanded.update(_expand_param(key, value))
        else:
            expanded[key] = value

    clean: dict[str, Any] = {}
    for key, value in expanded.items():
        validator = _VALIDATORS.get(key)
        if validator is None:
            raise ConfigError(f"unknown configuration key {key!r}", key=key)
        result = validator(value, key)
        if not result.valid:
            raise ConfigError(result.error or f"invalid value for {key}", key=key)
        clean[key] = result.value
    return clean


def apply_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Return a copy of ``config`` with validated overrides applied; ``None`` values are ignored.

    Raises:
        ConfigError: On an unknown key or an invalid value.
    """
    clean = _validated(overrides)
    if clean:
        logger.debug(f"config overrides: {sorted(clean)}")
    return replace(config, **clean)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        values[key.strip()] = value.strip()
    return values


def load_config(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    """Load a config file on top of ``base`` (defaults when omitted).

    Raises:
        ConfigError: If the file cannot be read, or holds a malformed line, an unknown key or
            an invalid value.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}", key="config_path") from e
    config = apply_overrides(base or RunConfig(), parse_config_text(text))
    return replace(config, config_path=str(path))
