"""64-bit challenge generator and the challenge schedule of one timing phase.

The generator is a Fibonacci LFSR that shifts left and feeds the XOR of its tap bits into bit 0.
Each challenge consumes 64 fresh shifts, so consecutive challenge words share no bits.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..constants import CHALLENGES_PER_PHASE, LFSR64_TAPS, PATHS_PER_CHALLENGE

_MASK64 = (1 << 64) - 1


def _feedback(state: int, taps: tuple[int, ...]) -> int:
    bit = 0
    for tap in taps:
        bit ^= state >> (tap - 1)
    return bit & 1


@dataclass(frozen=True)
class Lfsr64State:
    """State of the 64-bit challenge LFSR. Never zero."""

    state: int
    taps: tuple[int, ...] = LFSR64_TAPS

    def step(self) -> Lfsr64State:
        """Advance one shift."""
        nxt = ((self.state << 1) | _feedback(self.state, self.taps)) & _MASK64
        return Lfsr64State(nxt, self.taps)

    def advance(self, shifts: int) -> Lfsr64State:
        """Advance ``shifts`` shifts."""
        state, taps = self.state, self.taps
        for _ in range(shifts):
            state = ((state << 1) | _feedback(state, taps)) & _MASK64
        return Lfsr64State(state, taps)


@dataclass(frozen=True)
class Challenge:
    """One 64-bit challenge word.

    Bit 0 picks the rising (0) or falling (1) transition; the remaining bits are consumed as
    per-stage segment selectors by the entropy model.
    """

    word: int

    @property
    def edge(self) -> int:
        return self.word & 1

    def paths(self) -> range:
        """Output taps measurable under this challenge."""
        return range(PATHS_PER_CHALLENGE)


def lfsr64_seed(seed: int, taps: tuple[int, ...] = LFSR64_TAPS) -> Lfsr64State:
    """Seed the challenge LFSR; the all-zero seed maps to 1."""
    seed &= _MASK64
    return Lfsr64State(seed if seed else 1, taps)


def challenge_schedule(
    st: Lfsr64State, count: int = CHALLENGES_PER_PHASE
) -> tuple[list[Challenge], Lfsr64State]:
    """Generate the challenges of one timing phase.

    Args:
        st: Generator state; left untouched.
        count: Number of challenges (128 per timing phase).

    Returns:
        (challenges, advanced state). Each challenge is the register content after 64 shifts.
    """
    challenges: list[Challenge] = []
    for _ in range(count):
        st = st.advance(64)
        challenges.append(Challenge(st.state))
    return challenges, st
