"""Experiment commands: RC/TCC ablation, environment sweep and SF histograms."""

from __future__ import annotations

from typing import Any

from ..config import RunConfig
from ..entropy import EnvCondition
from .common import finish, resolve_config, with_config_parameters
from .registry import register_command

DEFAULT_BOARDS = (1, 2, 3, 4, 5)


def _parse_boards(boards: list[int] | str | None) -> list[int]:
    from ..exceptions import ValidationError
    from ..validation import validate_seed

    if boards is None:
        return list(DEFAULT_BOARDS)
    raw = boards.split(",") if isinstance(boards, str) else list(boards)
    seeds = []
    for item in raw:
        checked = validate_seed(item, "boards")
        if not checked.valid:
            raise ValidationError(checked.error or "invalid device seed", field="boards")
        seeds.append(int(checked.value))
    return seeds


def _rctcc_handler(
    boards: list[int] | str | None = None, config: RunConfig | None = None, **overrides: Any
) -> dict[str, Any]:
    """Min-entropy per device for each RC/TCC randomization setting.

    Args:
        boards: Device seeds (list or comma-separated); defaults to 1-5.
    """
    from ..experiments import RC_TCC_CSV_HEADER, experiment_rc_tcc
    from ..reports import sibling_path, write_csv

    cfg = resolve_config(config, overrides)
    experiment = experiment_rc_tcc(cfg, _parse_boards(boards))
    path = sibling_path(cfg.report_path, "rctcc.csv")
    write_csv(path, RC_TCC_CSV_HEADER, experiment.csv_rows())
    return finish(cfg, {**experiment.to_dict(), "csv": [str(path)]})


def _parse_sweep(sweep: list[dict[str, float]] | None) -> list[EnvCondition] | None:
    from ..exceptions import ValidationError

    if sweep is None:
        return None
    points: list[EnvCondition] = []
    for item in sweep:
        try:
            points.append(
                EnvCondition(
                    temp_offset=float(item.get("temp_offset", 0.0)),
                    supply_scale=float(item.get("supply_scale", 1.0)),
                )
            )
        except (TypeError, ValueError, AttributeError) as e:
            raise ValidationError(f"invalid sweep point {item!r}: {e}", field="sweep") from e
    return points


def _envsweep_handler(
    sweep: list[dict[str, float]] | None = None,
    config: RunConfig | None = None,
    **overrides: Any,
) -> dict[str, Any]:
    """Output divergence under DC temperature offsets and supply scaling.

    Args:
        sweep: Points as {"temp_offset": x, "supply_scale": y}; defaults to
            offsets of +/-10, 20, 50 counts and scales 0.95 and 1.05.
    """
    from ..experiments import ENV_CSV_HEADER, experiment_env_attack
    from ..reports import sibling_path, write_csv

    cfg = resolve_config(config, overrides)
    experiment = experiment_env_attack(cfg, _parse_sweep(sweep))
    path = sibling_path(cfg.report_path, "envsweep.csv")
    write_csv(path, ENV_CSV_HEADER, experiment.csv_rows())
    return finish(cfg, {**experiment.to_dict(), "csv": [str(path)]})


def _sfhist_handler(config: RunConfig | None = None, **overrides: Any) -> dict[str, Any]:
    """Histograms of DVD, DVD_c, DVD_cs and SF at fixed RC/TCC."""
    from ..experiments import sf_histogram
    from ..reports import sibling_path, write_histogram

    cfg = resolve_config(config, overrides)
    histogram = sf_histogram(cfg)
    files = []
    for quantity in ("dvd", "dvd_c", "dvd_cs", "sf"):
        path = sibling_path(cfg.report_path, f"sfhist_{quantity}.csv")
        write_histogram(path, rows=histogram.rows(quantity))
        files.append(str(path))
    return finish(cfg, {**histogram.to_dict(), "csv": files, "config": cfg.to_dict()})


register_command(
    name="rctcc",
    description=(
        "RC/TCC ablation: non-IID min-entropy estimates per device with RC and TCC"
        " randomization switched on and off over identical delay values."
    ),
    parameters=with_config_parameters(
        {
            "boards": {"type": "string", "description": "Comma-separated device seeds (>= 2)."},
            "fixed_rc": {"type": "integer", "description": "RC used when randomization is off."},
            "fixed_tcc": {"type": "integer", "description": "TCC used when randomization is off."},
        }
    ),
    handler=_rctcc_handler,
    category="experiments",
    bulk_field="rows",
)

register_command(
    name="envsweep",
    description=(
        "Environmental attack sweep: fraction of output bits that change under DC"
        " temperature offsets and supply scaling, with the noise seed held fixed."
    ),
    parameters=with_config_parameters(
        {
            "sweep": {
                "type": "array",
                "description": "List of {temp_offset, supply_scale} points.",
            },
        }
    ),
    handler=_envsweep_handler,
    category="experiments",
)

register_command(
    name="sfhist",
    description="Distributions of DVD, DVD_c, DVD_cs and spread factors at fixed RC/TCC.",
    parameters=with_config_parameters(
        {
            "fixed_rc": {"type": "integer", "description": "Range Constant (default 168)."},
            "fixed_tcc": {"type": "integer", "description": "Trim Code Constant (default 18)."},
        }
    ),
    handler=_sfhist_handler,
    category="experiments",
)
