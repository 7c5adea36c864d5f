"""Preference profiles, pairwise count/margin matrices, and ranking results.

A profile is a weighted multiset of ballots over a fixed registry of
alternatives. Ballots are weak orders: an ordered sequence of tie groups,
earlier groups strictly preferred to later ones. Ballots may omit
alternatives; omitted pairs simply contribute nothing to the pairwise counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DataError
from .tiebreak import TieBreakPolicy


@dataclass(frozen=True)
class Ballot:
    """One voter's weak order: ordered tie groups, with an integer multiplicity."""

    groups: tuple[frozenset[str], ...]
    weight: int = 1

    def __post_init__(self):
        if self.weight < 1 or int(self.weight) != self.weight:
            raise DataError(f"ballot weight must be a positive integer, got {self.weight}")
        if not self.groups:
            raise DataError("ballot must contain at least one group")
        seen: set[str] = set()
        for group in self.groups:
            if not group:
                raise DataError("ballot contains an empty tie group")
            for alt in group:
                if alt in seen:
                    raise DataError(f"alternative {alt!r} appears twice in one ballot")
                seen.add(alt)

    @staticmethod
    def strict(order: Sequence[str], weight: int = 1) -> "Ballot":
        """Ballot from a strict order (no ties)."""
        return Ballot(tuple(frozenset([a]) for a in order), weight)

    def alternatives(self) -> set[str]:
        return {a for g in self.groups for a in g}

    def length(self) -> int:
        return sum(len(g) for g in self.groups)

    def key(self) -> tuple[frozenset[str], ...]:
        """Structural identity of the ranking, ignoring weight."""
        return self.groups

    def restricted(self, keep: set[str]) -> Optional["Ballot"]:
        """Ballot with all alternatives outside `keep` deleted; None if empty."""
        groups = tuple(frozenset(g & keep) for g in self.groups)
        groups = tuple(g for g in groups if g)
        if not groups:
            return None
        return Ballot(groups, self.weight)


@dataclass(frozen=True)
class PreferenceProfile:
    """A registry of alternatives plus a sequence of weighted ballots."""

    alternatives: tuple[str, ...]
    ballots: tuple[Ballot, ...] = ()

    def __post_init__(self):
        if not self.alternatives:
            raise DataError("profile needs at least one alternative")
        seen: set[str] = set()
        for alt in self.alternatives:
            if not alt:
                raise DataError("alternative labels must be non-empty")
            if alt in seen:
                raise DataError(f"duplicate alternative label {alt!r}")
            seen.add(alt)
        for ballot in self.ballots:
            unknown = ballot.alternatives() - seen
            if unknown:
                raise DataError(f"ballot references unknown alternatives: {sorted(unknown)}")

    @property
    def num_alternatives(self) -> int:
        return len(self.alternatives)

    def index(self, alternative: str) -> int:
        return self.alternatives.index(alternative)

    def total_weight(self) -> int:
        return sum(b.weight for b in self.ballots)

    def with_ballots(self, ballots: Iterable[Ballot]) -> "PreferenceProfile":
        return PreferenceProfile(self.alternatives, tuple(ballots))

    def restricted(self, keep: Sequence[str]) -> "PreferenceProfile":
        """Sub-profile over `keep`, deleting the other alternatives from every ballot."""
        keep_set = set(keep)
        kept = []
        for ballot in self.ballots:
            reduced = ballot.restricted(keep_set)
            if reduced is not None:
                kept.append(reduced)
        return PreferenceProfile(tuple(a for a in self.alternatives if a in keep_set), tuple(kept))


@dataclass(frozen=True)
class PreferenceMatrix:
    """Pairwise strict-preference counts; counts[x, y] voters prefer x over y."""

    alternatives: tuple[str, ...]
    counts: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> int:
        i = self.alternatives.index(pair[0])
        j = self.alternatives.index(pair[1])
        return int(self.counts[i, j])


@dataclass(frozen=True)
class MarginMatrix:
    """Antisymmetric pairwise margins, counts minus their transpose."""

    alternatives: tuple[str, ...]
    margins: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> int:
        i = self.alternatives.index(pair[0])
        j = self.alternatives.index(pair[1])
        return int(self.margins[i, j])


@dataclass(frozen=True)
class RankEntry:
    rank: int
    alternative: str
    score: float


@dataclass(frozen=True)
class RankingResult:
    """Total order over a profile's alternatives with per-alternative scores."""

    method: str
    entries: tuple[RankEntry, ...]
    tiebreak_seed: int = 0

    def order(self) -> list[str]:
        return [e.alternative for e in self.entries]

    def scores(self) -> dict[str, float]:
        return {e.alternative: e.score for e in self.entries}

    def position(self, alternative: str) -> int:
        for e in self.entries:
            if e.alternative == alternative:
                return e.rank
        raise KeyError(alternative)

    def winner(self) -> str:
        return self.entries[0].alternative


def ranking_from_scores(
    profile: PreferenceProfile,
    scores: Mapping[str, float],
    method: str,
    policy: TieBreakPolicy,
) -> RankingResult:
    """Sort alternatives by score, breaking exact ties with the seeded perturbation
    and finally by registry order."""
    order = sorted(
        profile.alternatives,
        key=lambda a: (-(scores[a] + policy.offset(a)), profile.index(a)),
    )
    entries = tuple(
        RankEntry(rank=i + 1, alternative=a, score=float(scores[a])) for i, a in enumerate(order)
    )
    return RankingResult(method=method, entries=entries, tiebreak_seed=policy.seed)


def ranking_from_order(
    order: Sequence[str],
    scores: Mapping[str, float],
    method: str,
    policy: TieBreakPolicy,
) -> RankingResult:
    """Ranking whose order is fixed by the method itself (scores attached as-is)."""
    entries = tuple(
        RankEntry(rank=i + 1, alternative=a, score=float(scores[a])) for i, a in enumerate(order)
    )
    return RankingResult(method=method, entries=entries, tiebreak_seed=policy.seed)


def preference_matrix(profile: PreferenceProfile) -> PreferenceMatrix:
    """Count, for every ordered pair, the ballot weight strictly preferring x to y.

    Ties within a group contribute nothing in either direction; pairs where
    either alternative is absent from a ballot contribute nothing.
    """
    m = profile.num_alternatives
    index = {a: i for i, a in enumerate(profile.alternatives)}
    counts = np.zeros((m, m), dtype=np.int64)
    for ballot in profile.ballots:
        above: list[int] = []
        for group in ballot.groups:
            members = [index[a] for a in group]
            for hi in above:
                for lo in members:
                    counts[hi, lo] += ballot.weight
            above.extend(members)
    return PreferenceMatrix(profile.alternatives, counts)


def margin_matrix(profile: PreferenceProfile) -> MarginMatrix:
    """Margins N - N^T of the pairwise count matrix."""
    counts = preference_matrix(profile).counts
    return MarginMatrix(profile.alternatives, counts - counts.T)


def condorcet_winner(profile: PreferenceProfile) -> Optional[tuple[str, str]]:
    """Alternative beating (strong) or at least tying (weak) every other head-to-head.

    Returns (alternative, "strong"|"weak") or None. When several weak winners
    exist the first in registry order is returned.
    """
    margins = margin_matrix(profile).margins
    m = profile.num_alternatives
    off_diag = ~np.eye(m, dtype=bool)
    for i, alt in enumerate(profile.alternatives):
        row = margins[i][off_diag[i]]
        if row.size == 0 or np.all(row > 0):
            return alt, "strong"
    for i, alt in enumerate(profile.alternatives):
        row = margins[i][off_diag[i]]
        if np.all(row >= 0):
            return alt, "weak"
    return None


def ballots_from_score_rows(table) -> PreferenceProfile:
    """One ballot per task column: agents with present scores, sorted descending.

    Exactly-equal scores share a tie group (no epsilon snapping). Agents with
    no score on a task are simply left off that task's ballot.
    """
    from .tables import ScoreTable  # local import; tables also imports profiles users

    if not isinstance(table, ScoreTable):
        raise DataError("expected a ScoreTable")
    ballots = []
    for j, task in enumerate(table.tasks):
        present = []
        for i, agent in enumerate(table.agents):
            value = table.scores[i, j]
            if np.isnan(value):
                continue
            if not np.isfinite(value):
                raise DataError(f"non-finite score for agent {agent!r} on task {task!r}")
            present.append((value, agent))
        if not present:
            continue
        present.sort(key=lambda t: -t[0])
        groups: list[frozenset[str]] = []
        current: list[str] = []
        current_value = None
        for value, agent in present:
            if current and value == current_value:
                current.append(agent)
            else:
                if current:
                    groups.append(frozenset(current))
                current = [agent]
                current_value = value
        groups.append(frozenset(current))
        ballots.append(Ballot(tuple(groups), weight=1))
    return PreferenceProfile(tuple(table.agents), tuple(ballots))


def replicate_ballots(
    profile: PreferenceProfile, weights: Mapping[int, int]
) -> PreferenceProfile:
    """Multiply selected ballots' weights by per-index positive integer factors."""
    n = len(profile.ballots)
    for idx, factor in weights.items():
        if idx < 0 or idx >= n:
            raise DataError(f"ballot index {idx} out of range (profile has {n} ballots)")
        if factor < 1 or int(factor) != factor:
            raise DataError(f"replication factor must be a positive integer, got {factor}")
    ballots = [
        Ballot(b.groups, b.weight * int(weights.get(i, 1))) for i, b in enumerate(profile.ballots)
    ]
    return profile.with_ballots(ballots)
