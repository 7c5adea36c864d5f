import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from voterank import (
    Ballot,
    DataError,
    Lottery,
    PreferenceProfile,
    iml_rank,
    iterative_maximal_lotteries,
    margin_matrix,
    maximal_lottery,
    maximal_lottery_rank,
    solve_zero_sum,
)

from conftest import profiles


class TestLotteryType:
    def test_valid(self):
        lot = Lottery({"A": 0.25, "B": 0.75})
        assert lot["A"] == 0.25
        assert lot["missing"] == 0.0
        assert lot.support() == {"A", "B"}

    def test_bad_sum_rejected(self):
        with pytest.raises(DataError):
            Lottery({"A": 0.5, "B": 0.4})

    def test_negative_rejected(self):
        with pytest.raises(DataError):
            Lottery({"A": 1.5, "B": -0.5})


class TestSolveZeroSum:
    def test_rock_paper_scissors(self):
        m = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], dtype=float)
        sol = solve_zero_sum(m)
        assert abs(sol.value) < 1e-7
        assert np.allclose(sol.row_strategy, 1 / 3, atol=1e-6)
        assert np.allclose(sol.column_strategy, 1 / 3, atol=1e-6)

    def test_saddle_point_game(self):
        # Row 1 dominates row 0, column 0 dominates column 1: value 3.
        sol = solve_zero_sum(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert sol.value == pytest.approx(3.0, abs=1e-7)
        assert sol.row_strategy[1] == pytest.approx(1.0, abs=1e-6)
        assert sol.column_strategy[0] == pytest.approx(1.0, abs=1e-6)

    def test_equilibrium_inequalities(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.integers(-5, 6, size=(4, 5)).astype(float)
            sol = solve_zero_sum(a)
            assert np.min(sol.row_strategy @ a) >= sol.value - 1e-7
            assert np.max(a @ sol.column_strategy) <= sol.value + 1e-7

    def test_all_zero_matrix_returns_uniform(self):
        sol = solve_zero_sum(np.zeros((3, 2)))
        assert sol.value == 0.0
        assert np.allclose(sol.row_strategy, 1 / 3)

    def test_nan_rejected(self):
        with pytest.raises(DataError):
            solve_zero_sum(np.array([[np.nan, 1.0]]))

    @settings(max_examples=40, deadline=None)
    @given(
        arrays(
            np.int64,
            st.tuples(st.integers(2, 5), st.integers(2, 5)).map(lambda t: (t[0], t[0])),
            elements=st.integers(-9, 9),
        )
    )
    def test_antisymmetric_value_is_zero(self, raw):
        m = (raw - raw.T).astype(float)
        sol = solve_zero_sum(m)
        assert abs(sol.value) <= 1e-7


class TestMaximalLottery:
    def test_pentathlon_is_pure_c(self, pentathlon):
        lot = maximal_lottery(pentathlon)
        assert lot["C"] == pytest.approx(1.0, abs=1e-7)
        assert lot.support() == {"C"}

    def test_single_alternative(self):
        profile = PreferenceProfile(("A",), (Ballot.strict(["A"]),))
        assert maximal_lottery(profile)["A"] == 1.0

    def test_maximality_condition(self, pentathlon):
        lot = maximal_lottery(pentathlon)
        m = margin_matrix(pentathlon).margins
        p = np.array([lot[a] for a in pentathlon.alternatives])
        assert np.min(p @ m) >= -1e-7

    @settings(max_examples=40, deadline=None)
    @given(profiles(max_m=5))
    def test_maximality_on_random_profiles(self, profile):
        lot = maximal_lottery(profile)
        m = margin_matrix(profile).margins
        p = np.array([lot[a] for a in profile.alternatives])
        assert np.min(p @ m) >= -1e-7

    def test_rank_orders_by_probability(self, pentathlon):
        result, lottery = maximal_lottery_rank(pentathlon)
        assert result.winner() == "C"
        assert result.scores()["C"] == pytest.approx(1.0, abs=1e-7)


class TestIterativeMaximalLotteries:
    def test_pentathlon_levels(self, pentathlon):
        result = iterative_maximal_lotteries(pentathlon)
        assert [lv.winners for lv in result.levels] == [
            frozenset("C"),
            frozenset("A"),
            frozenset("B"),
        ]
        assert result.scores == pytest.approx({"C": 3.0, "A": 2.0, "B": 1.0}, abs=1e-7)

    def test_unanimous_profile_is_strictly_transitive(self):
        profile = PreferenceProfile(
            ("A", "B", "C", "D"), (Ballot.strict(["A", "B", "C", "D"]),)
        )
        result = iterative_maximal_lotteries(profile)
        assert result.num_levels() == 4
        assert result.scores == pytest.approx(
            {"A": 4.0, "B": 3.0, "C": 2.0, "D": 1.0}, abs=1e-7
        )

    def test_cycle_collapses_to_one_level(self):
        profile = PreferenceProfile(
            ("A", "B", "C"),
            (
                Ballot.strict(["A", "B", "C"]),
                Ballot.strict(["B", "C", "A"]),
                Ballot.strict(["C", "A", "B"]),
            ),
        )
        result = iterative_maximal_lotteries(profile)
        assert result.num_levels() == 1
        assert result.levels[0].winners == frozenset({"A", "B", "C"})

    @settings(max_examples=30, deadline=None)
    @given(profiles(max_m=5))
    def test_levels_partition_alternatives(self, profile):
        result = iterative_maximal_lotteries(profile)
        covered = [a for lv in result.levels for a in lv.winners]
        assert sorted(covered) == sorted(profile.alternatives)
        for lv in result.levels:
            assert sum(lv.lottery[a] for a in lv.winners) == pytest.approx(1.0, abs=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(profiles(max_m=5))
    def test_submatrix_equals_restricted_profile_margins(self, profile):
        result = iterative_maximal_lotteries(profile)
        if result.num_levels() < 2:
            return
        survivors = [
            a for a in profile.alternatives if a not in result.levels[0].winners
        ]
        full = margin_matrix(profile)
        reduced = margin_matrix(profile.restricted(survivors))
        for a in survivors:
            for b in survivors:
                assert reduced[(a, b)] == full[(a, b)]

    def test_rank_embeds_level_and_probability(self, pentathlon):
        result, detail = iml_rank(pentathlon)
        assert result.order() == ["C", "A", "B"]
        assert detail.num_levels() == 3
