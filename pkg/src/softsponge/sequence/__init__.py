"""Pseudo-random sequencing: challenge LFSR, challenge schedule and DVDiff selectors."""

from .lfsr import Challenge, Lfsr64State, challenge_schedule, lfsr64_seed
from .selector import Selector11State, pair_seeds, select_indices, selector_cycle

__all__ = [
    "Challenge",
    "Lfsr64State",
    "Selector11State",
    "challenge_schedule",
    "lfsr64_seed",
    "pair_seeds",
    "select_indices",
    "selector_cycle",
]
