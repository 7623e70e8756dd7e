"""Analysis commands: the statistical suite on stored bits and the PCC ablation."""

from __future__ import annotations

from typing import Any

from ..config import RunConfig
from .common import finish, resolve_config, verdict_summary, with_config_parameters
from .registry import register_command

SUITES = ("ais31", "iid", "estimators", "nonce")
DEFAULT_SUITES = ("ais31", "iid", "estimators")


def _suite_names(suites: list[str] | str | None) -> list[str]:
    from ..exceptions import ValidationError

    if suites is None:
        return list(DEFAULT_SUITES)
    names = [s.strip() for s in suites.split(",")] if isinstance(suites, str) else list(suites)
    unknown = sorted(set(names) - set(SUITES))
    if unknown:
        raise ValidationError(
            f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}", field="suites"
        )
    return names


def _bit_file_results(path: str, names: list[str], cfg: RunConfig) -> dict[str, Any]:
    from ..stats import (
        BitSequence,
        ais31_suite,
        estimator_suite,
        iid_permutation_suite,
        nonce_quality,
    )

    seq = BitSequence.from_file(path)
    result: dict[str, Any] = {"path": path, "bits": len(seq)}
    passed = True
    if "ais31" in names:
        summary = verdict_summary(ais31_suite(seq))
        result["ais31"] = summary
        passed &= summary["passed"]
    if "iid" in names:
        iid = iid_permutation_suite(seq, cfg.permutations, cfg.perm_seed, cfg.workers)
        result["iid"] = iid.to_dict()
        passed &= iid.passed
    if "estimators" in names:
        result["estimators"] = estimator_suite(seq)
    if "nonce" in names:
        summary = verdict_summary(nonce_quality(seq))
        result["nonce"] = summary
        passed &= summary["passed"]
    result["passed"] = passed
    return result


def _trace_results(path: str, cfg: RunConfig) -> dict[str, Any]:
    import numpy as np

    from ..bitio import read_trace
    from ..constants import FIXED_ONE
    from ..stats import pcc_scan, sign_balance, uniformity_chi_square

    trace = read_trace(path)
    half = trace.tcc * FIXED_ONE // 2
    violations = int(np.count_nonzero(np.abs(trace.values) > half[:, None]))
    uniformity = uniformity_chi_square(trace.by_tcc())
    result: dict[str, Any] = {
        "path": path,
        "records": len(trace),
        "sign_balance": sign_balance(trace.values),
        "containment_violations": violations,
        "uniformity": uniformity.to_dict(),
    }
    if len(trace) >= 2:
        result["pcc"] = pcc_scan(trace.values, cfg.pcc_sampling, cfg.perm_seed).to_dict()
    result["passed"] = violations == 0 and uniformity.passed
    return result


def _analyze_handler(
    bit_file: str | None = None,
    suites: list[str] | str | None = None,
    config: RunConfig | None = None,
    **overrides: Any,
) -> dict[str, Any]:
    """Run the certification suites on a packed bit file and/or a DVD_cs trace.

    Args:
        bit_file: Packed bit file.
        suites: Subset of ais31, iid, estimators, nonce (comma-separated or a list).
        config: Base configuration; ``trace_path`` names the trace to analyze.
    """
    from ..exceptions import ValidationError

    cfg = resolve_config(config, overrides)
    if not bit_file and not cfg.trace_path:
        raise ValidationError("analyze needs a bit file or a trace file", field="bit_file")
    result: dict[str, Any] = {}
    passed = True
    if bit_file:
        result["bit_file"] = _bit_file_results(bit_file, _suite_names(suites), cfg)
        passed &= result["bit_file"]["passed"]
    if cfg.trace_path:
        result["trace"] = _trace_results(cfg.trace_path, cfg)
        passed &= result["trace"]["passed"]
    result["passed"] = passed
    result["config"] = cfg.to_dict()
    return finish(cfg, result)


def _pcc_handler(config: RunConfig | None = None, **overrides: Any) -> dict[str, Any]:
    """Correlation ablation: DVD_cs sets of one timing record with and without chaining.

    Writes histogram CSVs next to the report.
    """
    from contextlib import ExitStack

    from ..bitio import TraceWriter
    from ..experiments import experiment_pcc
    from ..reports import sibling_path, write_histogram

    cfg = resolve_config(config, overrides)
    with ExitStack() as stack:
        trace = stack.enter_context(TraceWriter(cfg.trace_path)) if cfg.trace_path else None
        experiment = experiment_pcc(cfg, trace)
    result = experiment.to_dict()
    csv_files = []
    for label, report in (("chained", experiment.chained), ("unchained", experiment.unchained)):
        path = sibling_path(cfg.report_path, f"pcc_{label}.csv")
        write_histogram(path, rows=report.histogram_rows())
        csv_files.append(str(path))
    result["csv"] = csv_files
    return finish(cfg, result)


register_command(
    name="analyze",
    description=(
        "Run AIS-31 T0-T8, the SP 800-90B IID permutation test and the non-IID estimators"
        " on a packed bit file; with trace_path, check a DVD_cs trace."
    ),
    parameters=with_config_parameters(
        {
            "bit_file": {"type": "string", "description": "Packed MSB-first bit file."},
            "suites": {
                "type": "string",
                "description": "Comma-separated subset of ais31, iid, estimators, nonce.",
            },
            "trace_path": {"type": "string", "description": "DVD_cs trace file to check."},
            "permutations": {"type": "integer", "description": "IID shuffles (>= 100)."},
            "perm_seed": {"type": "integer", "description": "Seed of shuffles and pair draws."},
            "workers": {"type": "integer", "description": "Worker processes for the IID test."},
            "pcc_sampling": {"type": "string", "description": "'auto', 'all' or a pair count."},
        }
    ),
    handler=_analyze_handler,
    category="analysis",
)

register_command(
    name="pcc",
    description=(
        "Pearson correlation scan of one cycle's DVD_cs sets with and without"
        " spread-factor chaining, plus sign balance and uniformity."
    ),
    parameters=with_config_parameters(
        {
            "pcc_sampling": {"type": "string", "description": "'auto', 'all' or a pair count."},
            "perm_seed": {"type": "integer", "description": "Seed of the pair sampler."},
            "trace_path": {"type": "string", "description": "Binary trace of chained DVD_cs."},
        }
    ),
    handler=_pcc_handler,
    category="analysis",
)
