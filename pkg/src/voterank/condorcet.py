"""Deterministic Condorcet methods: Copeland, Kemeny-Young, Schulze, Ranked Pairs.

Each method carries its own per-alternative score definition:

* Copeland: head-to-head wins plus half the head-to-head ties.
* Kemeny: margin mass toward everything ranked below in the optimal sequence.
* Schulze: summed pairwise counts over beatpath-dominated alternatives.
* Ranked Pairs: summed weight of edges reachable at source-removal time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError
from .profiles import (
    MarginMatrix,
    PreferenceProfile,
    RankingResult,
    margin_matrix,
    preference_matrix,
    ranking_from_order,
    ranking_from_scores,
)
from .tiebreak import TieBreakPolicy

KEMENY_MAX_ALTERNATIVES = 10


@dataclass(frozen=True)
class StrongestPathMatrix:
    """Widest-path strengths between all pairs (Schulze's P matrix)."""

    alternatives: tuple[str, ...]
    strengths: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> int:
        i = self.alternatives.index(pair[0])
        j = self.alternatives.index(pair[1])
        return int(self.strengths[i, j])


@dataclass(frozen=True)
class RankedPairsGraph:
    """Acyclic majority graph built by greedy strongest-first edge insertion."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]  # (from, to, margin), insertion order


def copeland_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> RankingResult:
    policy = policy or TieBreakPolicy()
    margins = margin_matrix(profile).margins
    m = profile.num_alternatives
    scores = {}
    for i, alt in enumerate(profile.alternatives):
        row = np.delete(margins[i], i)
        scores[alt] = float(np.sum(row > 0) + 0.5 * np.sum(row == 0))
    return ranking_from_scores(profile, scores, "copeland", policy)


def _kemeny_value(counts: np.ndarray, perm: Sequence[int]) -> int:
    total = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            total += counts[perm[i], perm[j]]
    return int(total)


def kemeny_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> RankingResult:
    """Exhaustive scan of all m! sequences for the maximum total margin mass.

    Ties among optimal sequences are broken by the seeded per-alternative
    perturbation (lexicographically over the sequence), then registry order.
    """
    policy = policy or TieBreakPolicy()
    m = profile.num_alternatives
    if m > KEMENY_MAX_ALTERNATIVES:
        raise CapacityError(
            f"Kemeny is limited to {KEMENY_MAX_ALTERNATIVES} alternatives "
            f"(m! sequences); got {m}"
        )
    counts = preference_matrix(profile).counts
    best_value = None
    best_perms: list[tuple[int, ...]] = []
    for perm in itertools.permutations(range(m)):
        value = _kemeny_value(counts, perm)
        if best_value is None or value > best_value:
            best_value = value
            best_perms = [perm]
        elif value == best_value:
            best_perms.append(perm)
    offsets = [policy.offset(a) for a in profile.alternatives]
    best = max(best_perms, key=lambda p: tuple(offsets[i] for i in p))
    order = [profile.alternatives[i] for i in best]
    scores = {}
    for pos, i in enumerate(best):
        scores[profile.alternatives[i]] = float(sum(counts[i, j] for j in best[pos + 1 :]))
    return ranking_from_order(order, scores, "kemeny", policy)


def kemeny_value(profile: PreferenceProfile, order: Sequence[str]) -> int:
    """Total margin mass of one candidate sequence (exposed for inspection)."""
    counts = preference_matrix(profile).counts
    perm = [profile.index(a) for a in order]
    return _kemeny_value(counts, perm)


def strongest_paths(profile: PreferenceProfile) -> StrongestPathMatrix:
    """Widest-path closure: edges exist where the margin is positive, with the
    pairwise count as capacity."""
    counts = preference_matrix(profile).counts
    margins = counts - counts.T
    m = profile.num_alternatives
    p = np.where(margins > 0, counts, 0).astype(np.int64)
    np.fill_diagonal(p, 0)
    for k in range(m):
        through_k = np.minimum.outer(p[:, k], p[k, :])
        p = np.maximum(p, through_k)
    np.fill_diagonal(p, 0)
    return StrongestPathMatrix(profile.alternatives, p)


def schulze_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> tuple[RankingResult, StrongestPathMatrix]:
    policy = policy or TieBreakPolicy()
    paths = strongest_paths(profile)
    counts = preference_matrix(profile).counts
    p = paths.strengths
    m = profile.num_alternatives
    beats = p > p.T  # a beats b iff the strongest path a->b is wider than b->a
    scores = {}
    for i, alt in enumerate(profile.alternatives):
        scores[alt] = float(counts[i, beats[i]].sum())
    # Linear extension of the (transitive) beatpath relation: repeatedly emit
    # the undominated alternative ranked highest by the reference ballot.
    # Breaking incomparabilities with a ballot keeps clone insertion from
    # reordering the other alternatives.
    position = _reference_positions(profile, policy)
    remaining = list(range(m))
    order: list[str] = []
    while remaining:
        sources = [
            i for i in remaining if not any(beats[j, i] for j in remaining if j != i)
        ]
        if not sources:
            sources = list(remaining)
        chosen = min(sources, key=lambda i: position[profile.alternatives[i]])
        order.append(profile.alternatives[chosen])
        remaining.remove(chosen)
    return ranking_from_order(order, scores, "schulze", policy), paths


def _reachable(adj: dict[str, list[tuple[str, int]]], start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt, _ in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _reference_positions(
    profile: PreferenceProfile, policy: TieBreakPolicy
) -> dict[str, int]:
    """Strict reference ranking for breaking equal-margin ties, taken from a
    seed-selected ballot.

    Clones sit adjacently in every ballot, so a ballot-derived tie-break order
    keeps them adjacent too — the property that makes ranked pairs insensitive
    to clone insertion even among tied margins.
    """
    order: list[str] = []
    if profile.ballots:
        ballot = profile.ballots[policy.pick(len(profile.ballots), "rp-reference")]
        for group in ballot.groups:
            order.extend(sorted(group, key=lambda a: -policy.offset(a)))
    listed = set(order)
    order.extend(
        sorted(
            (a for a in profile.alternatives if a not in listed),
            key=lambda a: -policy.offset(a),
        )
    )
    return {a: i for i, a in enumerate(order)}


def ranked_pairs_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> tuple[RankingResult, RankedPairsGraph]:
    """Greedy acyclic insertion of positive-margin pairs, strongest first.

    Equal margins are ordered by a reference ballot (prefer the pair whose
    loser is ranked lower, then the pair whose winner is ranked higher). The
    final order removes one source at a time; an alternative's score sums the
    weights of every edge reachable from it at the moment it is removed.
    """
    policy = policy or TieBreakPolicy()
    margins = margin_matrix(profile).margins
    alts = profile.alternatives
    pairs = [
        (alts[i], alts[j], int(margins[i, j]))
        for i in range(len(alts))
        for j in range(len(alts))
        if margins[i, j] > 0
    ]
    position = _reference_positions(profile, policy)
    pairs.sort(key=lambda e: (-e[2], -position[e[1]], position[e[0]]))

    adj: dict[str, list[tuple[str, int]]] = {a: [] for a in alts}
    edges: list[tuple[str, str, int]] = []
    for a, b, w in pairs:
        if a in _reachable(adj, b):
            continue  # inserting a->b would close a cycle
        adj[a].append((b, w))
        edges.append((a, b, w))

    remaining = set(alts)
    order: list[str] = []
    scores: dict[str, float] = {}
    live_adj = {a: list(nbrs) for a, nbrs in adj.items()}
    while remaining:
        has_incoming = {b for a in remaining for b, _ in live_adj[a]}
        sources = [a for a in remaining if a not in has_incoming]
        if not sources:
            sources = list(remaining)  # disconnected leftovers count as sources
        source = min(
            sources, key=lambda a: (-policy.offset(a), profile.index(a))
        )
        span = _reachable(live_adj, source)
        scores[source] = float(
            sum(w for a in span for b, w in live_adj[a] if b in span)
        )
        order.append(source)
        remaining.discard(source)
        live_adj[source] = []
        for a in remaining:
            live_adj[a] = [(b, w) for b, w in live_adj[a] if b != source]

    graph = RankedPairsGraph(nodes=alts, edges=tuple(edges))
    return ranking_from_order(order, scores, "ranked_pairs", policy), graph
