"""Generalization and robustness experiments.

Covers the Kendall-tau prediction-error protocol over train/test splits of
game records, ballot-diversity counting, random-profile and clone-injection
generators, and the consistency-property checkers (Condorcet, population,
clone) used to exercise each voting rule's axioms on random instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DataError, UsageError
from .lotteries import maximal_lottery
from .methods import rank_with
from .profiles import (
    Ballot,
    PreferenceProfile,
    RankingResult,
    condorcet_winner,
    margin_matrix,
)
from .tiebreak import TieBreakPolicy


@dataclass(frozen=True)
class GameRecord:
    """One played game: participants and their end-of-game outcome scores."""

    game_id: str
    participants: tuple[tuple[str, float], ...]

    def __post_init__(self):
        if len(self.participants) < 2:
            raise DataError(f"game {self.game_id!r} needs at least 2 participants")
        if any(not np.isfinite(s) for _, s in self.participants):
            raise DataError(f"game {self.game_id!r} has a non-finite outcome score")

    def groups(self) -> list[frozenset[str]]:
        """Weak order over participants, best outcome first."""
        by_score: dict[float, list[str]] = {}
        for agent, score in self.participants:
            by_score.setdefault(score, []).append(agent)
        return [frozenset(by_score[s]) for s in sorted(by_score, reverse=True)]


@dataclass(frozen=True)
class SplitSpec:
    seed: int
    train_size: int
    test_size: int
    replicates: int = 50

    def __post_init__(self):
        if self.train_size < 1 or self.test_size < 1 or self.replicates < 1:
            raise UsageError("split sizes and replicate count must be positive")


def profile_from_games(games: Sequence[GameRecord]) -> PreferenceProfile:
    """One ballot per game, ranking its participants by outcome score."""
    agents: list[str] = []
    seen: set[str] = set()
    ballots = []
    for game in games:
        for agent, _ in game.participants:
            if agent not in seen:
                seen.add(agent)
                agents.append(agent)
        ballots.append(Ballot(tuple(game.groups()), weight=1))
    if not agents:
        raise DataError("no games supplied")
    return PreferenceProfile(tuple(agents), tuple(ballots))


def _as_groups(ranking: Iterable) -> list[frozenset[str]]:
    groups = []
    for item in ranking:
        if isinstance(item, str):
            groups.append(frozenset([item]))
        else:
            groups.append(frozenset(item))
    return groups


def kendall_tau(reference: RankingResult, other: Iterable) -> int:
    """Pairwise disagreements between a full ranking and a (possibly partial,
    possibly tied) ranking over a subset of its alternatives.

    Tied pairs in `other` contribute nothing.
    """
    groups = _as_groups(other)
    position = {e.alternative: e.rank for e in reference.entries}
    level = {}
    for depth, group in enumerate(groups):
        for alt in group:
            if alt in level:
                raise DataError(f"alternative {alt!r} repeated in comparison ranking")
            if alt not in position:
                raise DataError(f"alternative {alt!r} missing from reference ranking")
            level[alt] = depth
    alts = list(level)
    disagreements = 0
    for i in range(len(alts)):
        for j in range(i + 1, len(alts)):
            a, b = alts[i], alts[j]
            if level[a] == level[b]:
                continue
            in_other = level[a] < level[b]
            in_reference = position[a] < position[b]
            if in_other != in_reference:
                disagreements += 1
    return disagreements


def error_per_game(
    test: Sequence[GameRecord], ranking: RankingResult
) -> tuple[float, int]:
    """Mean Kendall-tau error over test games; also returns how many
    participants had to be dropped for being absent from the ranking."""
    if not test:
        raise DataError("empty test set")
    known = {e.alternative for e in ranking.entries}
    total = 0.0
    dropped = 0
    for game in test:
        groups = []
        for group in game.groups():
            kept = group & known
            dropped += len(group) - len(kept)
            if kept:
                groups.append(kept)
        total += kendall_tau(ranking, groups)
    return total / len(test), dropped


def count_unique_votes(profile: PreferenceProfile) -> tuple[int, dict]:
    """Distinct ballot count (structural comparison of group sequences) and a
    histogram ballot -> total multiplicity."""
    histogram: dict[tuple, int] = {}
    for ballot in profile.ballots:
        histogram[ballot.key()] = histogram.get(ballot.key(), 0) + ballot.weight
    return len(histogram), histogram


def inject_clones(
    profile: PreferenceProfile, target: str, copies: int, seed: int
) -> PreferenceProfile:
    """Insert `copies` fresh alternatives adjacent to `target` in every ballot.

    The within-clone-set order is drawn independently per ballot, which is the
    strongest form the clone/component definition allows. If the target sits
    inside a tie group, the clones join that group (anything else would break
    the component property against the group's other members).
    """
    if copies < 1:
        raise UsageError("copies must be >= 1")
    if target not in profile.alternatives:
        raise DataError(f"unknown clone target {target!r}")
    clones = [f"{target}#clone{i + 1}" for i in range(copies)]
    for name in clones:
        if name in profile.alternatives:
            raise DataError(f"clone label {name!r} collides with an existing alternative")
    rng = np.random.default_rng(seed)
    new_ballots = []
    for ballot in profile.ballots:
        groups: list[frozenset[str]] = []
        for group in ballot.groups:
            if target not in group:
                groups.append(group)
            elif len(group) > 1:
                groups.append(group | frozenset(clones))
            else:
                block = [target] + clones
                order = list(rng.permutation(len(block)))
                groups.extend(frozenset([block[i]]) for i in order)
        new_ballots.append(Ballot(tuple(groups), ballot.weight))
    alternatives = list(profile.alternatives)
    at = alternatives.index(target)
    alternatives[at + 1 : at + 1] = clones
    return PreferenceProfile(tuple(alternatives), tuple(new_ballots))


GUMBEL_SCALE = 400.0 / math.log(10.0)


def random_profile(
    m: int,
    n_ballots: int,
    seed: int,
    model: str = "impartial-culture",
    ratings: Optional[Sequence[float]] = None,
) -> PreferenceProfile:
    """Random strict-order profile.

    impartial-culture draws uniform permutations. elo-world draws, per ballot,
    one Gumbel-noised performance per agent centred on its latent rating, so
    pairwise win probabilities match the base-10 logistic prediction.
    """
    if m < 1 or n_ballots < 1:
        raise UsageError("need m >= 1 and n_ballots >= 1")
    rng = np.random.default_rng(seed)
    alternatives = tuple(f"a{i}" for i in range(m))
    ballots = []
    if model == "impartial-culture":
        for _ in range(n_ballots):
            order = [alternatives[i] for i in rng.permutation(m)]
            ballots.append(Ballot.strict(order))
    elif model == "elo-world":
        if ratings is None or len(ratings) != m:
            raise UsageError("elo-world needs one latent rating per alternative")
        mu = np.asarray(ratings, dtype=float) / GUMBEL_SCALE
        for _ in range(n_ballots):
            perf = mu + rng.gumbel(size=m)
            order = [alternatives[i] for i in np.argsort(-perf)]
            ballots.append(Ballot.strict(order))
    else:
        raise UsageError(f"unknown profile model {model!r}")
    return PreferenceProfile(alternatives, tuple(ballots))


def synthetic_game_corpus(
    num_agents: int,
    num_games: int,
    players_per_game: int,
    seed: int,
    rating_spread: float = 400.0,
) -> list[GameRecord]:
    """Elo-world corpus of multi-player games for the split-error protocol."""
    rng = np.random.default_rng(seed)
    ratings = rng.uniform(0.0, rating_spread, size=num_agents)
    mu = ratings / GUMBEL_SCALE
    games = []
    for g in range(num_games):
        players = rng.choice(num_agents, size=players_per_game, replace=False)
        perf = mu[players] + rng.gumbel(size=players_per_game)
        games.append(
            GameRecord(
                game_id=f"g{g}",
                participants=tuple(
                    (f"p{players[i]}", float(perf[i])) for i in range(players_per_game)
                ),
            )
        )
    return games


@dataclass(frozen=True)
class SplitErrorReport:
    method: str
    mean_error: float
    ci95: float
    per_split: tuple[float, ...]
    dropped_participants: int


def split_error_experiment(
    games: Sequence[GameRecord],
    methods: Sequence[str],
    spec: SplitSpec,
    policy: Optional[TieBreakPolicy] = None,
    approval_k: int = 2,
) -> list[SplitErrorReport]:
    """Train/test split protocol: rank on the train games, score the mean
    per-game Kendall-tau error on the test games, repeat over replicates, and
    report 95% normal-approximation confidence intervals."""
    policy = policy or TieBreakPolicy()
    if spec.train_size + spec.test_size > len(games):
        raise UsageError(
            f"train+test = {spec.train_size + spec.test_size} exceeds corpus size {len(games)}"
        )
    per_method: dict[str, list[float]] = {m: [] for m in methods}
    dropped: dict[str, int] = {m: 0 for m in methods}
    for rep in range(spec.replicates):
        rng = np.random.default_rng((spec.seed, rep))
        picks = rng.permutation(len(games))
        train = [games[i] for i in picks[: spec.train_size]]
        test = [games[i] for i in picks[spec.train_size : spec.train_size + spec.test_size]]
        profile = profile_from_games(train)
        for name in methods:
            base, _, suffix = name.partition(":")
            k = int(suffix) if base == "approval" and suffix else approval_k
            ranking = rank_with(base, profile, policy, k=k)
            err, drop = error_per_game(test, ranking)
            per_method[name].append(err)
            dropped[name] += drop
    reports = []
    for name in methods:
        errs = np.asarray(per_method[name])
        sd = errs.std(ddof=1) if len(errs) > 1 else 0.0
        reports.append(
            SplitErrorReport(
                method=name,
                mean_error=float(errs.mean()),
                ci95=float(1.96 * sd / math.sqrt(len(errs))) if len(errs) > 1 else 0.0,
                per_split=tuple(float(e) for e in errs),
                dropped_participants=dropped[name],
            )
        )
    return reports


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one consistency-property suite."""

    property_name: str
    method: str
    trials: int
    violations: int
    counterexamples: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "property": self.property_name,
            "method": self.method,
            "trials": self.trials,
            "violations": self.violations,
            "counterexamples": list(self.counterexamples),
        }


def _serialize_profile(profile: PreferenceProfile) -> str:
    from .io import format_ballots  # late import: io depends on harness types

    return format_ballots(profile)


def _random_small_profile(rng: np.random.Generator, m_max: int) -> PreferenceProfile:
    m = int(rng.integers(3, m_max + 1))
    n = int(rng.integers(1, 13)) * 2 + 1  # odd ballot counts avoid zero margins
    seed = int(rng.integers(0, 2**31))
    return random_profile(m, n, seed)


def check_condorcet_consistency(
    method: str,
    trials: int,
    seed: int,
    m_max: int = 6,
    k: int = 2,
    max_counterexamples: int = 5,
) -> CheckReport:
    """Random profiles with a strong Condorcet winner: count how often the
    method fails to top-rank it."""
    rng = np.random.default_rng(seed)
    policy = TieBreakPolicy(seed)
    violations = 0
    examples: list[str] = []
    done = 0
    while done < trials:
        profile = _random_small_profile(rng, m_max)
        winner = condorcet_winner(profile)
        if winner is None or winner[1] != "strong":
            continue
        done += 1
        ranking = rank_with(method, profile, policy, k=k)
        if ranking.winner() != winner[0]:
            violations += 1
            if len(examples) < max_counterexamples:
                examples.append(_serialize_profile(profile))
    return CheckReport("condorcet_consistency", method, trials, violations, tuple(examples))


_SCORING_METHODS = {"plurality", "borda", "approval"}


def _argmax_set(method: str, profile: PreferenceProfile, policy, k: int) -> set[str]:
    scores = rank_with(method, profile, policy, k=k).scores()
    top = max(scores.values())
    return {a for a, s in scores.items() if s == top}


def check_population_consistency(
    method: str,
    trials: int,
    seed: int,
    m_max: int = 5,
    k: int = 2,
    max_counterexamples: int = 5,
) -> CheckReport:
    """Disjoint voter populations that agree must still agree when merged.

    Scoring rules are checked on exact argmax-score sets; maximal lotteries on
    whether a lottery maximal for both profiles stays maximal for the merged
    one; other methods on their (resolute) top choice.
    """
    rng = np.random.default_rng(seed)
    policy = TieBreakPolicy(seed)
    violations = 0
    examples: list[str] = []
    done = 0
    while done < trials:
        m = int(rng.integers(3, m_max + 1))
        n1 = int(rng.integers(1, 9)) * 2 + 1
        n2 = int(rng.integers(1, 9)) * 2 + 1
        p1 = random_profile(m, n1, int(rng.integers(0, 2**31)))
        p2 = random_profile(m, n2, int(rng.integers(0, 2**31)))
        merged = p1.with_ballots(p1.ballots + p2.ballots)
        if method == "maximal_lottery":
            lottery = maximal_lottery(p1)
            p_vec = np.array([lottery[a] for a in p1.alternatives])
            m2 = margin_matrix(p2).margins
            if np.min(p_vec @ m2) < -1e-7:
                continue  # not maximal for the second population
            done += 1
            m_sum = margin_matrix(merged).margins
            if np.min(p_vec @ m_sum) < -1e-6:
                violations += 1
                if len(examples) < max_counterexamples:
                    examples.append(
                        _serialize_profile(p1) + "\n--\n" + _serialize_profile(p2)
                    )
        elif method in _SCORING_METHODS:
            s1 = _argmax_set(method, p1, policy, k)
            s2 = _argmax_set(method, p2, policy, k)
            common = s1 & s2
            if not common:
                continue
            done += 1
            if not _argmax_set(method, merged, policy, k) <= common:
                violations += 1
                if len(examples) < max_counterexamples:
                    examples.append(
                        _serialize_profile(p1) + "\n--\n" + _serialize_profile(p2)
                    )
        else:
            w1 = rank_with(method, p1, policy, k=k).winner()
            w2 = rank_with(method, p2, policy, k=k).winner()
            if w1 != w2:
                continue
            done += 1
            if rank_with(method, merged, policy, k=k).winner() != w1:
                violations += 1
                if len(examples) < max_counterexamples:
                    examples.append(
                        _serialize_profile(p1) + "\n--\n" + _serialize_profile(p2)
                    )
    return CheckReport("population_consistency", method, trials, violations, tuple(examples))


def check_clone_consistency(
    method: str,
    trials: int,
    seed: int,
    m_max: int = 5,
    k: int = 2,
    marginal_tol: float = 1e-6,
    max_counterexamples: int = 5,
) -> CheckReport:
    """Inserting clones next to a random target must not reorder the other
    alternatives (for maximal lotteries: must not move their probabilities)."""
    rng = np.random.default_rng(seed)
    policy = TieBreakPolicy(seed)
    violations = 0
    examples: list[str] = []
    for trial in range(trials):
        profile = _random_small_profile(rng, m_max)
        target = profile.alternatives[int(rng.integers(0, profile.num_alternatives))]
        copies = int(rng.integers(1, 4))
        clone_seed = int(rng.integers(0, 2**31))
        cloned = inject_clones(profile, target, copies, clone_seed)
        others = [a for a in profile.alternatives if a != target]
        violated = False
        if method == "maximal_lottery":
            before = maximal_lottery(profile)
            after = maximal_lottery(cloned)
            violated = any(abs(before[a] - after[a]) > marginal_tol for a in others)
        else:
            before_rank = rank_with(method, profile, policy, k=k)
            after_rank = rank_with(method, cloned, policy, k=k)
            before_order = [a for a in before_rank.order() if a in others]
            after_order = [a for a in after_rank.order() if a in others]
            violated = before_order != after_order
        if violated:
            violations += 1
            if len(examples) < max_counterexamples:
                examples.append(
                    f"# target={target} copies={copies} clone_seed={clone_seed}\n"
                    + _serialize_profile(profile)
                )
    return CheckReport("clone_consistency", method, trials, violations, tuple(examples))
