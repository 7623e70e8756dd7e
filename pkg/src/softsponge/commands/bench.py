"""Throughput of each pipeline stage. Figures are informational and never gate a verdict."""

from __future__ import annotations

import time
from typing import Any

from ..config import RunConfig
from .common import finish, resolve_config, with_config_parameters
from .registry import register_command


def _rate(bits: int, seconds: float) -> float:
    return round(bits / seconds, 1) if seconds > 0 else 0.0


def _bench_handler(config: RunConfig | None = None, **overrides: Any) -> dict[str, Any]:
    """Time one cycle of the pipeline and the statistical suites on its output."""
    from ..constants import MEASUREMENTS_PER_PHASE, SET_SIZE
    from ..pipeline import TrngPipeline
    from ..stats import BitSequence, ais31_suite, estimator_suite

    cfg = resolve_config(config, overrides)
    pipeline = TrngPipeline(cfg)
    stages: dict[str, dict[str, float]] = {}

    cycle = pipeline.prepare()
    for phase in ("bootstrap", "timing"):
        seconds = cycle.seconds[phase]
        stages[phase] = {
            "seconds": round(seconds, 4),
            "measurements_per_second": _rate(MEASUREMENTS_PER_PHASE, seconds),
        }

    t0 = time.perf_counter()
    result = pipeline.squeeze(cycle)
    seconds = time.perf_counter() - t0
    iterations = result.bits.size // SET_SIZE
    stages["sponge"] = {
        "seconds": round(seconds, 4),
        "iterations_per_second": _rate(iterations, seconds),
        "bits_per_second": _rate(result.bits.size, seconds),
    }

    seq = BitSequence.from_bits(result.bits)
    for name, suite in (("ais31", ais31_suite), ("estimators", estimator_suite)):
        t0 = time.perf_counter()
        suite(seq)
        seconds = time.perf_counter() - t0
        stages[name] = {"seconds": round(seconds, 4), "bits_per_second": _rate(len(seq), seconds)}

    return finish(cfg, {"bits": int(result.bits.size), "stages": stages, "config": cfg.to_dict()})


register_command(
    name="bench",
    description="Software throughput of the timing phase, sponge loop, AIS-31 and estimators.",
    parameters=with_config_parameters({}),
    handler=_bench_handler,
    category="bench",
)
