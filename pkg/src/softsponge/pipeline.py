"""Boot-strap, timing and sponge phases wired into the generator cycle.

One cycle is a boot-strap timing phase under the fixed challenge seed (DVs discarded, nonce
kept), a second timing phase seeded from the nonce (DVs kept), and 2048 sponge iterations
over those DVs. The measurement noise stream runs on across phases and cycles, so one
``RunConfig`` determines every emitted bit.
"""

from __future__ import annotations

import time
from collections.abc import Iterator
from contextlib import ExitStack
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .bitio import BitSink, TraceWriter
from .config import RunConfig
from .constants import BITS_PER_CYCLE, BOOTSTRAP_SEED
from .entropy import DeviceFingerprint, NoiseStream, TimingRecord, build_device, timing_phase
from .logging_config import create_logger
from .nonce import NonceBuffer, ParamSchedule, derive_seed, distill, param_schedule
from .sequence import challenge_schedule, lfsr64_seed
from .sponge import SpongeResult, TraceHook, sponge_run

logger = create_logger(__name__)


def cycles_for(bits: int) -> int:
    """Whole cycles needed to cover a bit budget."""
    return max(1, -(-bits // BITS_PER_CYCLE))


@dataclass
class CycleInput:
    """What the sponge consumes: the boot-strap nonce and the kept timing record."""

    nonce: NonceBuffer
    timing: TimingRecord
    seconds: dict[str, float] = field(default_factory=dict)


@dataclass
class CycleOutput:
    index: int
    cycle: CycleInput
    result: SpongeResult
    seconds: dict[str, float] = field(default_factory=dict)


class TrngPipeline:
    """Stateful generator for one device, environment and noise stream."""

    def __init__(
        self,
        config: RunConfig,
        device: DeviceFingerprint | None = None,
        noise: NoiseStream | None = None,
    ):
        self.config = config
        self.device = device or build_device(config.device_seed, config.geometry)
        self.noise = noise or config.noise.stream()
        self.zero_toggle = 0

    def _timing(self, seed: int) -> TimingRecord:
        challenges, _ = challenge_schedule(lfsr64_seed(seed))
        return timing_phase(self.device, challenges, self.config.env, self.noise)

    def bootstrap(self) -> NonceBuffer:
        """Boot-strap timing phase; only the distilled nonce survives."""
        return distill(self._timing(BOOTSTRAP_SEED).lsb_stream)

    def prepare(self) -> CycleInput:
        """Run both timing phases of one cycle."""
        t0 = time.perf_counter()
        nonce = self.bootstrap()
        t1 = time.perf_counter()
        timing = self._timing(derive_seed(nonce))
        t2 = time.perf_counter()
        return CycleInput(nonce, timing, {"bootstrap": t1 - t0, "timing": t2 - t1})

    def squeeze(
        self,
        cycle: CycleInput,
        chaining_enabled: bool | None = None,
        trace: TraceHook | None = None,
        params: ParamSchedule | None = None,
    ) -> SpongeResult:
        """Run the sponge over a prepared cycle.

        Chaining and the RC/TCC schedule default to the run configuration.
        """
        config = self.config
        result = sponge_run(
            cycle.timing,
            cycle.nonce,
            config.chaining_enabled if chaining_enabled is None else chaining_enabled,
            params=params or param_schedule(cycle.nonce, config.rc_override, config.tcc_override),
            gpev_bounds=config.gpev_bounds,
            trace=trace,
            zero_toggle=self.zero_toggle,
        )
        self.zero_toggle = result.state.zero_toggle
        return result

    def cycles(self, count: int, trace: TraceHook | None = None) -> Iterator[CycleOutput]:
        """Yield ``count`` full cycles."""
        for index in range(count):
            cycle = self.prepare()
            t0 = time.perf_counter()
            result = self.squeeze(cycle, trace=trace)
            seconds = dict(cycle.seconds, sponge=time.perf_counter() - t0)
            logger.info(
                f"cycle {index + 1}/{count}: {result.bits.size} bits, "
                f"sign imbalance {result.sign_imbalance:.6f}"
            )
            yield CycleOutput(index, cycle, result, seconds)


@dataclass
class RunReport:
    """Summary of one generator run."""

    bits_emitted: int
    cycles: int
    health: dict[str, int]
    phase_seconds: dict[str, float]
    positive: int
    negative: int
    zero: int
    nonces: list[str]
    config: dict[str, Any]
    bytes_written: int = 0
    bits: np.ndarray | None = None

    @property
    def elapsed(self) -> float:
        return sum(self.phase_seconds.values())

    @property
    def throughput(self) -> float:
        """Software bits per second; informational only."""
        return self.bits_emitted / self.elapsed if self.elapsed > 0 else 0.0

    @property
    def sign_imbalance(self) -> float:
        total = self.positive + self.negative + self.zero
        return abs(self.positive - self.negative) / total if total else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "bits_emitted": self.bits_emitted,
            "bytes_written": self.bytes_written,
            "cycles": self.cycles,
            "health": self.health,
            "phase_seconds": {k: round(v, 4) for k, v in self.phase_seconds.items()},
            "throughput_bps": round(self.throughput, 1),
            "signs": {
                "positive": self.positive,
                "negative": self.negative,
                "zero": self.zero,
                "imbalance": round(self.sign_imbalance, 6),
            },
            "nonces": self.nonces,
            "config": self.config,
        }


def run_trng(
    config: RunConfig,
    *,
    sink: BitSink | None = None,
    keep_bits: bool = False,
    trace: TraceHook | None = None,
) -> RunReport:
    """Generate whole cycles until ``config.bits`` is covered.

    Bits go to ``sink``, else to ``config.out`` when set. ``config.trace_path`` opens a
    trace file unless a ``trace`` hook is passed.

    Raises:
        DegenerateRangeError: If the source produces a dead distribution.
        BitIOError: If the output or trace cannot be written.
        PipeClosedError: If the stdout reader closes early.
    """
    count = cycles_for(config.bits)
    logger.info(f"generating {count} cycle(s), {count * BITS_PER_CYCLE} bits")
    pipeline = TrngPipeline(config)
    seconds = {"bootstrap": 0.0, "timing": 0.0, "sponge": 0.0}
    positive = negative = zero = emitted = 0
    nonces: list[str] = []
    kept: list[np.ndarray] = []
    degenerate = 0

    with ExitStack() as stack:
        if sink is None and config.out:
            sink = stack.enter_context(BitSink(config.out))
        if trace is None and config.trace_path:
            trace = stack.enter_context(TraceWriter(config.trace_path))

        for out in pipeline.cycles(count, trace):
            result = out.result
            if sink is not None:
                sink.write(result.bits)
            if keep_bits:
                kept.append(result.bits)
            for phase, value in out.seconds.items():
                seconds[phase] += value
            positive += result.positive
            negative += result.negative
            zero += result.zero
            degenerate += result.state.degenerate_range_events
            emitted += int(result.bits.size)
            nonces.append(out.cycle.nonce.to_hex())

    report = RunReport(
        bits_emitted=emitted,
        cycles=count,
        health={"clamp_events": pipeline.noise.clamp_events, "degenerate_range_events": degenerate},
        phase_seconds=seconds,
        positive=positive,
        negative=negative,
        zero=zero,
        nonces=nonces,
        config=config.to_dict(),
        bytes_written=sink.bytes_written if sink is not None else 0,
        bits=np.concatenate(kept) if kept else None,
    )
    logger.info(f"emitted {emitted} bits at {report.throughput:,.0f} bit/s")
    return report


def bootstrap_nonces(config: RunConfig, count: int) -> list[NonceBuffer]:
    """Repeat the boot-strap phase; nonces differ only through measurement noise."""
    pipeline = TrngPipeline(config)
    nonces = [pipeline.bootstrap() for _ in range(count)]
    logger.info(f"collected {count} boot-strap nonces")
    return nonces
