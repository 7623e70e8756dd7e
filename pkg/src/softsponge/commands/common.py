"""Helpers shared by command handlers."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Any

from ..config import RunConfig, apply_overrides, load_config
from ..reports import write_json
from ..stats import TestVerdict

# JSON-schema-like descriptions of the RunConfig keys every command accepts
CONFIG_PARAMETERS: dict[str, Any] = {
    "config_path": {"type": "string", "description": "Flat key = value config file."},
    "device_seed": {"type": "integer", "description": "Simulated device identity."},
    "noise_seed": {"type": "integer", "description": "Seed of the measurement noise."},
    "noise_sigma": {"type": "number", "description": "Noise standard deviation in counts."},
    "temp_offset": {"type": "number", "description": "Additive DC offset in counts."},
    "supply_scale": {"type": "number", "description": "Multiplicative delay scale."},
    "chaining_enabled": {"type": "boolean", "description": "Spread-factor chaining on/off."},
    "rc": {"type": "string", "description": "'rand' or a fixed Range Constant 128-191."},
    "tcc": {"type": "string", "description": "'rand' or a fixed even Trim Code Constant 8-22."},
    "gpev_bounds": {"type": "string", "description": "'symmetric' or 'literal'."},
    "bits": {"type": "integer", "description": "Bit budget; rounded up to whole cycles."},
    "report_path": {"type": "string", "description": "Where to write the JSON report."},
}


def resolve_config(config: RunConfig | None, overrides: Mapping[str, Any]) -> RunConfig:
    """Base config, then an optional config file, then explicit overrides."""
    base = config or RunConfig()
    path = overrides.get("config_path")
    if path:
        base = load_config(path, base)
    rest = {k: v for k, v in overrides.items() if k != "config_path"}
    return apply_overrides(base, rest)


def with_config_parameters(parameters: dict[str, Any]) -> dict[str, Any]:
    return {**parameters, **CONFIG_PARAMETERS}


def finish(config: RunConfig, result: dict[str, Any]) -> dict[str, Any]:
    """Write the JSON report when a path is configured."""
    if config.report_path:
        write_json(config.report_path, result)
        result["report_path"] = config.report_path
    return result


def verdict_summary(verdicts: list[TestVerdict]) -> dict[str, Any]:
    """Verdict dicts plus the pass flag over the tests that had enough data."""
    evaluated = [v for v in verdicts if not v.details.get("insufficient_data")]
    return {
        "passed": bool(evaluated) and all(v.passed for v in evaluated),
        "evaluated": len(evaluated),
        "skipped": [v.name for v in verdicts if v.details.get("insufficient_data")],
        "tests": [v.to_dict() for v in verdicts],
    }
