"""Ablation and robustness experiments over the generator pipeline.

Each experiment returns a report object with ``to_dict()`` for the JSON report and
``*_rows()`` helpers for the CSV files a plotting script needs.
"""

from __future__ import annotations

import statistics
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .config import RunConfig
from .constants import (
    FIXED_ONE,
    ITERATIONS_PER_CYCLE,
    PARAM_SLOTS,
    SET_SIZE,
    SF_LIMIT,
    UNIFORMITY_BINS,
)
from .entropy import EnvCondition
from .exceptions import ValidationError
from .logging_config import create_logger
from .nonce import IterationParams, param_schedule
from .pipeline import CycleInput, TrngPipeline, cycles_for, run_trng
from .reports import histogram_rows
from .sponge import TraceHook, dv_diff, gpev_compensate, to_real
from .stats import (
    BitSequence,
    PccReport,
    TestVerdict,
    estimator_suite,
    pcc_scan,
    sign_balance,
    uniformity_chi_square,
)

logger = create_logger(__name__)

DEFAULT_ENV_SWEEP: tuple[EnvCondition, ...] = (
    EnvCondition(temp_offset=-50.0),
    EnvCondition(temp_offset=-20.0),
    EnvCondition(temp_offset=-10.0),
    EnvCondition(temp_offset=10.0),
    EnvCondition(temp_offset=20.0),
    EnvCondition(temp_offset=50.0),
    EnvCondition(supply_scale=0.95),
    EnvCondition(supply_scale=1.05),
)

RC_TCC_CELLS: tuple[tuple[bool, bool], ...] = (
    (False, False),
    (False, True),
    (True, False),
    (True, True),
)


class SetCollector:
    """Trace hook keeping every DVD_cs set of one cycle and the TCC it was folded with."""

    def __init__(self, iterations: int = ITERATIONS_PER_CYCLE):
        self.sets = np.zeros((iterations, SET_SIZE), dtype=np.int32)
        self.tcc = np.zeros(iterations, dtype=np.int64)

    def __call__(
        self, iteration: int, params: IterationParams, dvd_cs: np.ndarray, sf: np.ndarray
    ) -> None:
        self.sets[iteration] = dvd_cs
        self.tcc[iteration] = params.tcc

    def by_tcc(self) -> dict[int, np.ndarray]:
        return {int(t): self.sets[self.tcc == t].ravel() for t in np.unique(self.tcc)}


def tee(*hooks: TraceHook | None) -> TraceHook:
    """One trace hook forwarding to several; ``None`` entries are skipped."""
    active = [h for h in hooks if h is not None]

    def forward(
        iteration: int, params: IterationParams, dvd_cs: np.ndarray, sf: np.ndarray
    ) -> None:
        for hook in active:
            hook(iteration, params, dvd_cs, sf)

    return forward


# ── PCC ablation ──


@dataclass
class PccExperiment:
    chained: PccReport
    unchained: PccReport
    sign_balance: dict[str, Any]
    uniformity: TestVerdict
    containment_violations: int
    config: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "chained": self.chained.to_dict(),
            "unchained": self.unchained.to_dict(),
            "sign_balance": self.sign_balance,
            "uniformity": self.uniformity.to_dict(),
            "containment_violations": self.containment_violations,
            "config": self.config,
        }


def _containment_violations(collector: SetCollector) -> int:
    half = collector.tcc * FIXED_ONE // 2
    return int(np.count_nonzero(np.abs(collector.sets) > half[:, None]))


def experiment_pcc(config: RunConfig, trace: TraceHook | None = None) -> PccExperiment:
    """Correlate DVD_cs sets of one timing record with and without SF chaining.

    Both scans draw the same pairs: they share the sampler seed and the set count.
    ``trace`` also observes the chained run.
    """
    pipeline = TrngPipeline(config)
    cycle = pipeline.prepare()

    chained = SetCollector()
    pipeline.squeeze(cycle, chaining_enabled=True, trace=tee(chained, trace))
    unchained = SetCollector()
    pipeline.squeeze(cycle, chaining_enabled=False, trace=unchained)

    seed = config.perm_seed
    chained_report = pcc_scan(chained.sets, config.pcc_sampling, seed)
    unchained_report = pcc_scan(unchained.sets, config.pcc_sampling, seed)
    logger.info(
        f"max |PCC|: chained {chained_report.max_abs_r:.4f}, "
        f"unchained {unchained_report.max_abs_r:.4f}"
    )
    return PccExperiment(
        chained=chained_report,
        unchained=unchained_report,
        sign_balance=sign_balance(chained.sets),
        uniformity=uniformity_chi_square(chained.by_tcc()),
        containment_violations=_containment_violations(chained),
        config=config.to_dict(),
    )


# ── RC/TCC ablation ──


def cell_label(rc_randomized: bool, tcc_randomized: bool) -> str:
    return f"rc={'on' if rc_randomized else 'off'},tcc={'on' if tcc_randomized else 'off'}"


@dataclass
class RcTccExperiment:
    rows: list[dict[str, Any]]
    config: dict[str, Any]

    def medians(self) -> dict[str, float]:
        """Median suite-minimum per configuration."""
        result: dict[str, float] = {}
        for rc_on, tcc_on in RC_TCC_CELLS:
            label = cell_label(rc_on, tcc_on)
            values = [r["minimum"] for r in self.rows if r["cell"] == label]
            if values:
                result[label] = float(statistics.median(values))
        return result

    def csv_rows(self) -> list[tuple[Any, ...]]:
        return [
            (
                r["device_seed"],
                int(r["rc_randomized"]),
                int(r["tcc_randomized"]),
                r["mcv"],
                r["collision"],
                r["markov"],
                r["compression"],
                r["minimum"],
            )
            for r in self.rows
        ]

    def to_dict(self) -> dict[str, Any]:
        return {"medians": self.medians(), "rows": self.rows, "config": self.config}


RC_TCC_CSV_HEADER = (
    "device_seed",
    "rc_randomized",
    "tcc_randomized",
    "mcv",
    "collision",
    "markov",
    "compression",
    "minimum",
)


def _cell_bits(
    pipeline: TrngPipeline,
    cycles: list[CycleInput],
    config: RunConfig,
    rc_on: bool,
    tcc_on: bool,
) -> np.ndarray:
    pipeline.zero_toggle = 0
    chunks = [
        pipeline.squeeze(
            c,
            params=param_schedule(
                c.nonce, None if rc_on else config.fixed_rc, None if tcc_on else config.fixed_tcc
            ),
        ).bits
        for c in cycles
    ]
    return np.concatenate(chunks)[: config.bits]


def experiment_rc_tcc(config: RunConfig, boards: Sequence[int]) -> RcTccExperiment:
    """Min-entropy of each device under the four RC/TCC randomization settings.

    Timing records are measured once per device and reused by all four settings, so only the
    parameter schedule differs between cells.

    Raises:
        ValidationError: With fewer than two device seeds.
    """
    if len(boards) < 2:
        raise ValidationError("rc/tcc ablation needs at least two device seeds", field="boards")
    rows: list[dict[str, Any]] = []
    count = cycles_for(config.bits)
    for board in boards:
        pipeline = TrngPipeline(replace(config, device_seed=board))
        cycles = [pipeline.prepare() for _ in range(count)]
        for rc_on, tcc_on in RC_TCC_CELLS:
            bits = _cell_bits(pipeline, cycles, config, rc_on, tcc_on)
            estimates = estimator_suite(BitSequence.from_bits(bits))
            rows.append(
                {
                    "device_seed": board,
                    "cell": cell_label(rc_on, tcc_on),
                    "rc_randomized": rc_on,
                    "tcc_randomized": tcc_on,
                    **{k: round(v, 6) for k, v in estimates.items()},
                }
            )
        logger.info(f"device {board}: four configurations estimated")
    return RcTccExperiment(rows, config.to_dict())


# ── Environment attack ──


@dataclass
class EnvAttackExperiment:
    baseline_bits: int
    points: list[dict[str, Any]]
    config: dict[str, Any]

    def csv_rows(self) -> list[tuple[Any, ...]]:
        return [
            (p["temp_offset"], p["supply_scale"], p["differing_bits"], p["divergence"])
            for p in self.points
        ]

    def to_dict(self) -> dict[str, Any]:
        return {"baseline_bits": self.baseline_bits, "points": self.points, "config": self.config}


ENV_CSV_HEADER = ("temp_offset", "supply_scale", "differing_bits", "divergence")


def _bits_under(config: RunConfig, env: EnvCondition) -> np.ndarray:
    variant = replace(
        config,
        temp_offset=env.temp_offset,
        supply_scale=env.supply_scale,
        out=None,
        trace_path=None,
    )
    report = run_trng(variant, keep_bits=True)
    if report.bits is None:
        raise ValidationError("generator run kept no bits for comparison", field="keep_bits")
    return report.bits


def experiment_env_attack(
    config: RunConfig, sweep: Sequence[EnvCondition] | None = None
) -> EnvAttackExperiment:
    """Hamming fraction between the identity-environment output and each sweep point.

    Every point reuses ``config.noise_seed``, so only the DC environment differs.
    """
    baseline = _bits_under(config, EnvCondition())
    points: list[dict[str, Any]] = []
    for env in sweep or DEFAULT_ENV_SWEEP:
        bits = _bits_under(config, env)
        differing = int(np.count_nonzero(bits != baseline))
        divergence = differing / baseline.size
        logger.info(f"env {env.to_dict()}: divergence {divergence:.6f}")
        points.append({**env.to_dict(), "differing_bits": differing, "divergence": divergence})
    return EnvAttackExperiment(int(baseline.size), points, config.to_dict())


# ── SF and DVD distributions ──

_QUANTITIES = ("dvd", "dvd_c", "dvd_cs", "sf")


@dataclass
class SfHistogram:
    rc: int
    tcc: int
    snapshots: list[int]
    values: dict[str, np.ndarray] = field(repr=False)
    bins: int = UNIFORMITY_BINS

    def rows(self, quantity: str) -> list[tuple[float, float, int]]:
        if quantity == "sf":
            return histogram_rows(self.values["sf"], self.bins, (-SF_LIMIT, SF_LIMIT))
        if quantity == "dvd_cs":
            return histogram_rows(self.values["dvd_cs"], self.bins, (-self.tcc / 2, self.tcc / 2))
        return histogram_rows(self.values[quantity], self.bins)

    def summary(self) -> dict[str, dict[str, float]]:
        return {
            name: {
                "mean": float(v.mean()),
                "std": float(v.std()),
                "min": float(v.min()),
                "max": float(v.max()),
            }
            for name, v in self.values.items()
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "rc": self.rc,
            "tcc": self.tcc,
            "snapshot_iterations": self.snapshots,
            "summary": self.summary(),
        }


def sf_histogram(config: RunConfig) -> SfHistogram:
    """Distributions of DVD, DVD_c, DVD_cs and SF at iterations 19, 39, ...

    RC and TCC are held at the configured fixed values regardless of the randomize flags.
    """
    pipeline = TrngPipeline(config)
    cycle = pipeline.prepare()
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def capture(
        iteration: int, params: IterationParams, dvd_cs: np.ndarray, sf: np.ndarray
    ) -> None:
        if iteration % PARAM_SLOTS == PARAM_SLOTS - 1:
            snapshots[iteration] = (dvd_cs.copy(), sf.copy())

    pipeline.squeeze(
        cycle,
        chaining_enabled=True,
        trace=capture,
        params=param_schedule(cycle.nonce, config.fixed_rc, config.fixed_tcc),
    )

    collected: dict[str, list[np.ndarray]] = {name: [] for name in _QUANTITIES}
    for iteration, (dvd_cs, sf) in sorted(snapshots.items()):
        dvd = dv_diff(cycle.timing.dv_a, cycle.timing.dv_b, iteration)
        dvd_c = gpev_compensate(dvd, config.fixed_rc, config.gpev_bounds, iteration)
        collected["dvd"].append(dvd.real)
        collected["dvd_c"].append(dvd_c.real)
        collected["dvd_cs"].append(to_real(dvd_cs))
        collected["sf"].append(to_real(sf))
    return SfHistogram(
        rc=config.fixed_rc,
        tcc=config.fixed_tcc,
        snapshots=sorted(snapshots),
        values={name: np.concatenate(parts) for name, parts in collected.items()},
    )
