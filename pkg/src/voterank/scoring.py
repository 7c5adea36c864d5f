"""Positional scoring rules and single transferable vote.

Positional rules assign a weight vector over ballot positions; a tie group
spanning several positions gives each member the mean of the spanned weights.
STV follows the classic Droop-quota procedure with whole-vote surplus
transfer, and encodes its per-round tallies into a composite score so the
ranking and the election history are both readable from one number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DataError, UsageError
from .profiles import (
    PreferenceProfile,
    RankingResult,
    ranking_from_order,
    ranking_from_scores,
)
from .tiebreak import TieBreakPolicy


@dataclass(frozen=True)
class ScoringVector:
    """Non-increasing positional weights with w_1 > w_m."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = self.weights
        if len(w) < 2 or w[0] <= w[-1]:
            raise UsageError("scoring vector needs w_1 > w_m")
        if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
            raise UsageError("scoring vector must be non-increasing")


def plurality_vector(m: int) -> ScoringVector:
    return ScoringVector((1.0,) + (0.0,) * (m - 1))


def borda_vector(m: int) -> ScoringVector:
    return ScoringVector(tuple(float(m - 1 - i) for i in range(m)))


@dataclass(frozen=True)
class StvRound:
    quota: int
    tallies: dict[str, int]
    event: str  # "elected" | "eliminated"
    subject: str


@dataclass(frozen=True)
class StvTrace:
    rounds: tuple[StvRound, ...]
    winners_in_order: tuple[str, ...]
    losers_in_elimination_order: tuple[str, ...]  # index 0 = highest-ranked loser


def positional_rank(
    profile: PreferenceProfile,
    vector: ScoringVector,
    policy: Optional[TieBreakPolicy] = None,
    method: str = "positional",
) -> RankingResult:
    """Score each alternative by summed positional weights across ballots."""
    policy = policy or TieBreakPolicy()
    weights = vector.weights
    longest = max((b.length() for b in profile.ballots), default=0)
    if longest > len(weights):
        raise UsageError(
            f"scoring vector of length {len(weights)} is shorter than a ballot of length {longest}"
        )
    scores = {a: 0.0 for a in profile.alternatives}
    for ballot in profile.ballots:
        pos = 0
        for group in ballot.groups:
            span = weights[pos : pos + len(group)]
            shared = sum(span) / len(group)
            for alt in group:
                scores[alt] += ballot.weight * shared
            pos += len(group)
    return ranking_from_scores(profile, scores, method, policy)


def plurality_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> RankingResult:
    m = max(profile.num_alternatives, 2)
    result = positional_rank(profile, plurality_vector(m), policy, method="plurality")
    return result


def borda_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> RankingResult:
    """Borda with a per-ballot vector (len-1, ..., 0), so short ballots score
    against their own length rather than the registry size."""
    policy = policy or TieBreakPolicy()
    scores = {a: 0.0 for a in profile.alternatives}
    for ballot in profile.ballots:
        length = ballot.length()
        pos = 0
        for group in ballot.groups:
            span = [float(length - 1 - (pos + k)) for k in range(len(group))]
            shared = sum(span) / len(group)
            for alt in group:
                scores[alt] += ballot.weight * shared
            pos += len(group)
    return ranking_from_scores(profile, scores, "borda", policy)


def approval_rank(
    profile: PreferenceProfile, k: int, policy: Optional[TieBreakPolicy] = None
) -> RankingResult:
    """Approve the top k positions of each ballot; a tie group straddling the
    k boundary is approved in full."""
    policy = policy or TieBreakPolicy()
    if k < 1:
        raise UsageError(f"approval k must be >= 1, got {k}")
    scores = {a: 0.0 for a in profile.alternatives}
    for ballot in profile.ballots:
        pos = 0
        for group in ballot.groups:
            if pos >= k:
                break
            for alt in group:
                scores[alt] += ballot.weight
            pos += len(group)
    return ranking_from_scores(profile, scores, f"approval-{k}", policy)


def default_num_winners(m: int) -> int:
    return max(1, m // 2)


def _stv_score(base: int, tally: int) -> float:
    digits = len(str(max(tally, 0)))
    return base + tally / 10**digits


class _StvBallot:
    __slots__ = ("groups", "weight")

    def __init__(self, groups, weight):
        self.groups = groups  # list of lists of ids, preference order
        self.weight = weight

    def top(self, remaining: set[str], policy: TieBreakPolicy) -> Optional[str]:
        for group in self.groups:
            live = [a for a in group if a in remaining]
            if live:
                if len(live) == 1:
                    return live[0]
                # Tie group at the top: the full weight goes to one member,
                # chosen by the shared seeded perturbation.
                return max(live, key=policy.offset)
        return None


def stv_rank(
    profile: PreferenceProfile,
    num_winners: Optional[int] = None,
    policy: Optional[TieBreakPolicy] = None,
) -> tuple[RankingResult, StvTrace]:
    """Droop-quota STV returning the full ranking plus a round-by-round trace.

    Each round elects the highest tally reaching the quota (consuming exactly
    quota weight of its ballots in ballot order and transferring the surplus
    whole) or eliminates the lowest tally. Winner base scores are 2m - i over
    the election order; loser base scores are m - i with later-eliminated
    losers ranked higher; the fractional part encodes the round tally.
    """
    policy = policy or TieBreakPolicy()
    m = profile.num_alternatives
    if num_winners is None:
        num_winners = default_num_winners(m)
    if num_winners < 1 or num_winners > m:
        raise UsageError(f"num_winners must be in [1, {m}], got {num_winners}")

    ballots = [
        _StvBallot([sorted(g) for g in b.groups], b.weight) for b in profile.ballots
    ]
    remaining = set(profile.alternatives)
    winners: list[tuple[str, int]] = []  # (alternative, tally when elected)
    losers: list[tuple[str, int]] = []  # prepend order; index 0 ranked highest
    rounds: list[StvRound] = []

    def tallies() -> dict[str, int]:
        t = {a: 0 for a in remaining}
        for ballot in ballots:
            top = ballot.top(remaining, policy)
            if top is not None:
                t[top] += ballot.weight
        return t

    def remove(alt: str) -> None:
        remaining.discard(alt)

    def consume_quota(winner: str, quota: int) -> None:
        # Delete exactly `quota` weight from the winner's supporting ballots,
        # in ballot order; the remainder transfers whole.
        left = quota
        for ballot in ballots:
            if left == 0:
                break
            if ballot.weight == 0 or ballot.top(remaining, policy) != winner:
                continue
            used = min(ballot.weight, left)
            ballot.weight -= used
            left -= used

    while remaining:
        seats_left = num_winners - len(winners)
        counts = tallies()
        n = sum(counts.values())
        if seats_left > 0:
            quota = n // (seats_left + 1) + 1
        else:
            quota = n + 1  # no more seats: every remaining alternative is a loser
        if seats_left > 0 and counts and max(counts.values()) >= quota:
            winner = max(counts, key=lambda a: (counts[a], policy.offset(a)))
            rounds.append(StvRound(quota, dict(counts), "elected", winner))
            winners.append((winner, counts[winner]))
            consume_quota(winner, quota)
            remove(winner)
        else:
            loser = min(counts, key=lambda a: (counts[a], policy.offset(a)))
            rounds.append(StvRound(quota, dict(counts), "eliminated", loser))
            losers.insert(0, (loser, counts[loser]))
            remove(loser)

    scores: dict[str, float] = {}
    order: list[str] = []
    for i, (alt, tally) in enumerate(winners):
        scores[alt] = _stv_score(2 * m - i, tally)
        order.append(alt)
    for i, (alt, tally) in enumerate(losers):
        scores[alt] = _stv_score(m - i, tally)
        order.append(alt)

    trace = StvTrace(
        rounds=tuple(rounds),
        winners_in_order=tuple(a for a, _ in winners),
        losers_in_elimination_order=tuple(a for a, _ in losers),
    )
    ranking = ranking_from_order(order, scores, "stv", policy)
    return ranking, trace
