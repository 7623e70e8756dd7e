"""Tests for the challenge LFSR, the challenge schedule and the DVDiff selectors."""

from __future__ import annotations

import numpy as np
import pytest

from softsponge.constants import CHALLENGES_PER_PHASE, SELECTOR_STATES
from softsponge.exceptions import ValidationError
from softsponge.sequence import (
    Challenge,
    Lfsr64State,
    Selector11State,
    challenge_schedule,
    lfsr64_seed,
    pair_seeds,
    select_indices,
    selector_cycle,
)


class TestLfsr64:
    def test_zero_seed_maps_to_one(self) -> None:
        assert lfsr64_seed(0).state == 1

    def test_seed_is_masked_to_64_bits(self) -> None:
        assert lfsr64_seed((1 << 64) | 5).state == 5

    def test_step_shifts_left_without_feedback(self) -> None:
        assert Lfsr64State(1).step().state == 2

    def test_step_feeds_top_bit_back(self) -> None:
        assert Lfsr64State(1 << 63).step().state == 1

    def test_advance_matches_repeated_step(self) -> None:
        st = lfsr64_seed(0xDEADBEEF)
        stepped = st
        for _ in range(100):
            stepped = stepped.step()
        assert st.advance(100) == stepped

    def test_state_never_reaches_zero(self) -> None:
        st = lfsr64_seed(1)
        for _ in range(5000):
            st = st.step()
            assert st.state != 0

    def test_no_repeat_in_a_million_steps(self) -> None:
        st = lfsr64_seed(1)
        seen = {st.state}
        for _ in range(1_000_000):
            st = st.step()
            seen.add(st.state)
        assert len(seen) == 1_000_001


class TestChallengeSchedule:
    def test_default_count(self) -> None:
        challenges, _ = challenge_schedule(lfsr64_seed(1))
        assert len(challenges) == CHALLENGES_PER_PHASE

    def test_words_are_64_shift_snapshots(self) -> None:
        st = lfsr64_seed(7)
        challenges, end = challenge_schedule(st, count=3)
        assert challenges[0].word == st.advance(64).state
        assert challenges[2].word == st.advance(192).state
        assert end == st.advance(192)

    def test_input_state_untouched(self) -> None:
        st = lfsr64_seed(42)
        challenge_schedule(st, count=4)
        assert st.state == 42

    def test_words_distinct(self) -> None:
        challenges, _ = challenge_schedule(lfsr64_seed(1))
        assert len({c.word for c in challenges}) == CHALLENGES_PER_PHASE

    def test_deterministic(self) -> None:
        a, _ = challenge_schedule(lfsr64_seed(99))
        b, _ = challenge_schedule(lfsr64_seed(99))
        assert a == b

    def test_neighbouring_seeds_diverge(self) -> None:
        a, _ = challenge_schedule(lfsr64_seed(1))
        b, _ = challenge_schedule(lfsr64_seed(2))
        assert sum(x.word != y.word for x, y in zip(a, b, strict=True)) >= 120

    @pytest.mark.parametrize(
        ("word", "edge"), [(0b10, 0), (0b11, 1)], ids=["rising", "falling"]
    )
    def test_edge_bit(self, word: int, edge: int) -> None:
        assert Challenge(word).edge == edge

    def test_paths(self) -> None:
        assert len(Challenge(1).paths()) == 32


class TestSelector:
    def test_de_bruijn_cycle_visits_every_state(self) -> None:
        cycle, position = selector_cycle()
        assert cycle.size == SELECTOR_STATES
        assert sorted(cycle.tolist()) == list(range(SELECTOR_STATES))
        assert (position >= 0).all()

    def test_plain_lfsr_skips_zero(self) -> None:
        cycle, position = selector_cycle(de_bruijn=False)
        assert cycle.size == SELECTOR_STATES - 1
        assert position[0] == -1

    def test_zero_spliced_after_1024(self) -> None:
        assert Selector11State(1024).step().state == 0
        assert Selector11State(0).step().state == 1

    def test_cycle_tables_are_read_only(self) -> None:
        cycle, _ = selector_cycle()
        with pytest.raises(ValueError):
            cycle[0] = 5

    @pytest.mark.parametrize(
        ("iteration", "expected"),
        [(0, (0, 2047)), (1, (1, 2046)), (2047, (2047, 0))],
        ids=["first", "second", "last"],
    )
    def test_pair_seeds(self, iteration: int, expected: tuple[int, int]) -> None:
        assert pair_seeds(iteration) == expected

    @pytest.mark.parametrize("iteration", [-1, 2048], ids=["negative", "too-large"])
    def test_pair_seeds_out_of_range(self, iteration: int) -> None:
        with pytest.raises(ValidationError):
            pair_seeds(iteration)

    def test_select_indices_start_at_seeds(self) -> None:
        ia, ib = select_indices(5, 2042)
        assert ia[0] == 5
        assert ib[0] == 2042

    def test_select_indices_are_permutations(self) -> None:
        ia, ib = select_indices(*pair_seeds(300))
        assert np.array_equal(np.sort(ia), np.arange(SELECTOR_STATES))
        assert np.array_equal(np.sort(ib), np.arange(SELECTOR_STATES))

    def test_select_indices_follow_register(self) -> None:
        ia, _ = select_indices(17, 0)
        st = Selector11State(17)
        for j in range(50):
            assert ia[j] == st.state
            st = st.step()

    def test_select_indices_rejects_wide_seed(self) -> None:
        with pytest.raises(ValidationError):
            select_indices(2048, 0)

    @pytest.mark.parametrize("iteration", [0, 1, 100, 1023])
    def test_mirrored_iteration_swaps_pairs(self, iteration: int) -> None:
        ia, ib = select_indices(*pair_seeds(iteration))
        ja, jb = select_indices(*pair_seeds(SELECTOR_STATES - 1 - iteration))
        assert set(zip(ia.tolist(), ib.tolist(), strict=True)) == set(
            zip(jb.tolist(), ja.tolist(), strict=True)
        )
        assert not (ia == ib).any()
