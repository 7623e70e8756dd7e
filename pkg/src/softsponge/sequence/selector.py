"""Dual 11-bit selectors that pair DV_A and DV_B elements for DVDiff.

Each selector is a left-shifting Fibonacci LFSR on x^11 + x^2 + 1 with the de Bruijn
extension: the feedback is also flipped when the ten low bits are all zero, which splices the
all-zero state in after 0b10000000000 and stretches the period from 2047 to 2048.

Both selectors walk the same 2048-state cycle, so a pair sequence is fully described by the
two starting positions. The cycle is tabulated once and ``select_indices`` reads it with
numpy instead of stepping a register 2048 times per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..constants import SELECTOR_BITS, SELECTOR_STATES, SELECTOR_TAPS
from ..exceptions import ValidationError

_MASK = SELECTOR_STATES - 1
_LOW_MASK = _MASK >> 1


@dataclass(frozen=True)
class Selector11State:
    """State of one 11-bit selector."""

    state: int
    taps: tuple[int, ...] = SELECTOR_TAPS
    de_bruijn: bool = True

    def step(self) -> Selector11State:
        bit = 0
        for tap in self.taps:
            bit ^= self.state >> (tap - 1)
        bit &= 1
        if self.de_bruijn and (self.state & _LOW_MASK) == 0:
            bit ^= 1
        return Selector11State(((self.state << 1) | bit) & _MASK, self.taps, self.de_bruijn)


@lru_cache(maxsize=4)
def selector_cycle(
    taps: tuple[int, ...] = SELECTOR_TAPS, de_bruijn: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Tabulate the selector cycle.

    Returns:
        (cycle, position): ``cycle[p]`` is the state p steps after state 0 and
        ``position[s]`` is the index of state s in ``cycle``. Without the de Bruijn extension
        the walk starts at state 1, state 0 is unreachable and its position is -1.
    """
    st = Selector11State(0 if de_bruijn else 1, taps, de_bruijn)
    states: list[int] = []
    seen: set[int] = set()
    while st.state not in seen:
        seen.add(st.state)
        states.append(st.state)
        st = st.step()
    cycle = np.asarray(states, dtype=np.int64)
    position = np.full(SELECTOR_STATES, -1, dtype=np.int64)
    position[cycle] = np.arange(cycle.size, dtype=np.int64)
    cycle.setflags(write=False)
    position.setflags(write=False)
    return cycle, position


def pair_seeds(iteration: int) -> tuple[int, int]:
    """Selector seeds for one sponge iteration: (i, 2047 - i)."""
    if not 0 <= iteration < SELECTOR_STATES:
        raise ValidationError(
            f"iteration must be in [0, {SELECTOR_STATES - 1}], got {iteration}", field="iteration"
        )
    return iteration, _MASK - iteration


def _check_seed(seed: int, name: str) -> None:
    if not 0 <= seed < SELECTOR_STATES:
        raise ValidationError(
            f"{name} must be an {SELECTOR_BITS}-bit value, got {seed}", field=name
        )


def select_indices(seed_a: int, seed_b: int) -> tuple[np.ndarray, np.ndarray]:
    """Step both selectors 2048 times in lockstep from their seed states.

    The first pair is the seed states themselves.

    Returns:
        (ia, ib) int64 arrays of length 2048 indexing DV_A and DV_B.
    """
    _check_seed(seed_a, "seed_a")
    _check_seed(seed_b, "seed_b")
    cycle, position = selector_cycle()
    steps = np.arange(SELECTOR_STATES, dtype=np.int64)
    ia = cycle[(position[seed_a] + steps) % SELECTOR_STATES]
    ib = cycle[(position[seed_b] + steps) % SELECTOR_STATES]
    return ia, ib
