import importlib.resources

import pytest
from hypothesis import strategies as st

from voterank import Ballot, PreferenceProfile, parse_ballots

LETTERS = ("A", "B", "C", "D", "E", "F", "G")


@pytest.fixture
def pentathlon() -> PreferenceProfile:
    data = (
        importlib.resources.files("voterank") / "data" / "pentathlon.ballots"
    ).read_text()
    return parse_ballots(data)


@st.composite
def profiles(draw, max_m: int = 5, max_ballots: int = 8, allow_partial: bool = True):
    m = draw(st.integers(2, max_m))
    alternatives = LETTERS[:m]
    n = draw(st.integers(1, max_ballots))
    ballots = []
    for _ in range(n):
        if allow_partial:
            size = draw(st.integers(1, m))
        else:
            size = m
        chosen = draw(
            st.permutations(list(alternatives)).map(lambda p: tuple(p[:size]))
        )
        weight = draw(st.integers(1, 3))
        ballots.append(Ballot.strict(chosen, weight))
    return PreferenceProfile(tuple(alternatives), tuple(ballots))


@st.composite
def strict_orders(draw, m: int = 7):
    return tuple(draw(st.permutations(list(LETTERS[:m]))))
