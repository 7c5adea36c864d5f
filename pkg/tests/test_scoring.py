import pytest

from voterank import (
    Ballot,
    PreferenceProfile,
    ScoringVector,
    TieBreakPolicy,
    UsageError,
    approval_rank,
    borda_rank,
    borda_vector,
    default_num_winners,
    plurality_rank,
    plurality_vector,
    positional_rank,
    stv_rank,
)


class TestScoringVector:
    def test_increasing_rejected(self):
        with pytest.raises(UsageError):
            ScoringVector((0.0, 1.0))

    def test_flat_rejected(self):
        with pytest.raises(UsageError):
            ScoringVector((1.0, 1.0))

    def test_standard_vectors(self):
        assert plurality_vector(3).weights == (1.0, 0.0, 0.0)
        assert borda_vector(4).weights == (3.0, 2.0, 1.0, 0.0)


class TestPositional:
    def test_borda_pentathlon(self, pentathlon):
        scores = borda_rank(pentathlon).scores()
        assert scores == {"A": 6.0, "B": 3.0, "C": 6.0}

    def test_plurality_pentathlon(self, pentathlon):
        scores = plurality_rank(pentathlon).scores()
        assert scores == {"A": 2.0, "B": 1.0, "C": 2.0}

    def test_approval_2_pentathlon(self, pentathlon):
        result = approval_rank(pentathlon, 2)
        assert result.scores() == {"A": 4.0, "B": 2.0, "C": 4.0}
        assert result.method == "approval-2"

    def test_tie_group_gets_mean_weight(self):
        profile = PreferenceProfile(
            ("A", "B", "C"), (Ballot((frozenset(["A", "B"]), frozenset(["C"])),),)
        )
        scores = positional_rank(profile, borda_vector(3)).scores()
        assert scores == {"A": 1.5, "B": 1.5, "C": 0.0}

    def test_vector_shorter_than_ballot_rejected(self):
        profile = PreferenceProfile(("A", "B", "C"), (Ballot.strict(["A", "B", "C"]),))
        with pytest.raises(UsageError):
            positional_rank(profile, ScoringVector((1.0, 0.0)))

    def test_borda_short_ballot_scored_by_own_length(self):
        profile = PreferenceProfile(("A", "B", "C"), (Ballot.strict(["A", "B"]),))
        assert borda_rank(profile).scores() == {"A": 1.0, "B": 0.0, "C": 0.0}

    def test_approval_straddling_group_fully_approved(self):
        profile = PreferenceProfile(
            ("A", "B", "C"), (Ballot((frozenset(["A", "B"]), frozenset(["C"])),),)
        )
        scores = approval_rank(profile, 1).scores()
        assert scores == {"A": 1.0, "B": 1.0, "C": 0.0}

    def test_approval_bad_k(self, pentathlon):
        with pytest.raises(UsageError):
            approval_rank(pentathlon, 0)

    def test_weights_respected(self):
        profile = PreferenceProfile(
            ("A", "B"), (Ballot.strict(["A", "B"], weight=3), Ballot.strict(["B", "A"]))
        )
        assert plurality_rank(profile).scores() == {"A": 3.0, "B": 1.0}

    def test_seeded_tiebreak_is_deterministic(self, pentathlon):
        first = plurality_rank(pentathlon, TieBreakPolicy(7)).order()
        second = plurality_rank(pentathlon, TieBreakPolicy(7)).order()
        assert first == second


class TestStv:
    def test_default_num_winners(self):
        assert default_num_winners(3) == 1
        assert default_num_winners(7) == 3
        assert default_num_winners(1) == 1

    def test_pentathlon_single_winner(self, pentathlon):
        result, trace = stv_rank(pentathlon, num_winners=1)
        assert result.order() == ["C", "A", "B"]
        assert result.scores() == {"C": 6.3, "A": 3.2, "B": 2.1}
        assert trace.winners_in_order == ("C",)
        assert trace.losers_in_elimination_order == ("A", "B")

    def test_pentathlon_trace_rounds(self, pentathlon):
        _, trace = stv_rank(pentathlon, num_winners=1)
        first = trace.rounds[0]
        assert first.quota == 3
        assert first.tallies == {"A": 2, "B": 1, "C": 2}
        assert (first.event, first.subject) == ("eliminated", "B")
        second = trace.rounds[1]
        assert second.tallies == {"A": 2, "C": 3}
        assert (second.event, second.subject) == ("elected", "C")

    def test_each_round_has_one_event(self, pentathlon):
        _, trace = stv_rank(pentathlon, num_winners=2)
        assert len(trace.rounds) == pentathlon.num_alternatives
        subjects = [r.subject for r in trace.rounds]
        assert sorted(subjects) == sorted(pentathlon.alternatives)

    def test_surplus_transfers(self):
        # 10 voters: 7 x A>B>C, 3 x C>B>A; quota for 2 seats = 4.
        # A elected with surplus 3 transferred to B.
        profile = PreferenceProfile(
            ("A", "B", "C"),
            (
                Ballot.strict(["A", "B", "C"], weight=7),
                Ballot.strict(["C", "B", "A"], weight=3),
            ),
        )
        result, trace = stv_rank(profile, num_winners=2)
        assert trace.winners_in_order[0] == "A"
        assert trace.rounds[0].quota == 4
        # After A's election 3 ballots of weight remain on the A>B>C line.
        assert trace.rounds[1].tallies["B"] == 3

    def test_bad_num_winners(self, pentathlon):
        with pytest.raises(UsageError):
            stv_rank(pentathlon, num_winners=5)
