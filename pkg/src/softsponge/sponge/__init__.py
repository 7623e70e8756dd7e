"""Sponge post-processing: GPEV compensation, spread-factor chaining and bit squeezing."""

from .core import GpevBounds, bit_gen, dv_diff, gpev_compensate, sf_chain, sponge_run
from .fixed_point import SF_RAW_LIMIT, from_real, round_half_away, to_real, wrap_sf
from .types import DvdSet, SfState, SpongeResult, SpongeState, Stage, TraceHook

__all__ = [
    "SF_RAW_LIMIT",
    "DvdSet",
    "GpevBounds",
    "SfState",
    "SpongeResult",
    "SpongeState",
    "Stage",
    "TraceHook",
    "bit_gen",
    "dv_diff",
    "from_real",
    "gpev_compensate",
    "round_half_away",
    "sf_chain",
    "sponge_run",
    "to_real",
    "wrap_sf",
]
