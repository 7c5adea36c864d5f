"""Zero-sum matrix-game solving and (iterative) maximal lotteries.

The margin matrix of a profile defines a symmetric zero-sum game; a maximal
lottery is a maximin strategy of that game (value 0 by antisymmetry). The
iterative variant repeatedly removes the equilibrium support ("level") and
re-solves the margin subgame among the survivors, producing a total order
whose scores embed both the level and the within-level probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .errors import DataError, SolverError
from .profiles import (
    PreferenceProfile,
    RankingResult,
    margin_matrix,
    ranking_from_order,
)
from .tiebreak import TieBreakPolicy

SUPPORT_EPSILON = 1e-6
VALUE_TOLERANCE = 1e-7
MAX_SIMPLEX_ITERATIONS = 10**6


@dataclass(frozen=True)
class Lottery:
    """Probability distribution over alternatives."""

    probabilities: dict[str, float]

    def __post_init__(self):
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-9:
            raise DataError(f"lottery probabilities sum to {total}, not 1")
        if any(p < 0 for p in self.probabilities.values()):
            raise DataError("lottery contains a negative probability")

    def support(self, epsilon: float = SUPPORT_EPSILON) -> set[str]:
        return {a for a, p in self.probabilities.items() if p > epsilon}

    def __getitem__(self, alternative: str) -> float:
        return self.probabilities.get(alternative, 0.0)


@dataclass(frozen=True)
class GameSolution:
    row_strategy: np.ndarray
    column_strategy: np.ndarray
    value: float


@dataclass(frozen=True)
class LotteryLevel:
    winners: frozenset[str]
    lottery: Lottery


@dataclass(frozen=True)
class IterativeLotteryResult:
    levels: tuple[LotteryLevel, ...]
    scores: dict[str, float]

    def num_levels(self) -> int:
        return len(self.levels)


def solve_zero_sum(payoffs: np.ndarray) -> GameSolution:
    """Minimax-optimal strategies and value of a matrix game (row maximizes).

    Uses the standard LP reformulation: shift payoffs positive, maximize the
    total mass u subject to A^T u <= 1; the column strategy comes from the
    constraint duals. Degenerate all-zero games return uniform strategies.
    """
    payoffs = np.asarray(payoffs, dtype=float)
    if payoffs.ndim != 2 or payoffs.size == 0:
        raise DataError(f"payoff matrix must be 2-D and non-empty, got shape {payoffs.shape}")
    if not np.all(np.isfinite(payoffs)):
        raise DataError("payoff matrix contains NaN or infinite entries")
    m, n = payoffs.shape

    if np.all(payoffs == 0):
        return GameSolution(np.full(m, 1.0 / m), np.full(n, 1.0 / n), 0.0)

    shift = 1.0 + abs(payoffs.min())
    a = payoffs + shift  # strictly positive
    options = {"maxiter": MAX_SIMPLEX_ITERATIONS}
    # Row maximizer: with u = x / v, the maximin LP is min 1'u s.t. A'u >= 1.
    row_lp = linprog(
        c=np.ones(m),
        A_ub=-a.T,
        b_ub=-np.ones(n),
        bounds=[(0, None)] * m,
        method="highs",
        options=options,
    )
    # Column minimizer: with w = y / v, the minimax LP is max 1'w s.t. Aw <= 1.
    col_lp = linprog(
        c=-np.ones(n),
        A_ub=a,
        b_ub=np.ones(m),
        bounds=[(0, None)] * n,
        method="highs",
        options=options,
    )
    if not (row_lp.success and col_lp.success):
        raise SolverError(
            f"zero-sum LP failed: {row_lp.message if not row_lp.success else col_lp.message}"
        )
    u = np.maximum(row_lp.x, 0.0)
    w = np.maximum(col_lp.x, 0.0)
    if u.sum() <= 0 or w.sum() <= 0:
        raise SolverError("zero-sum LP returned a zero-mass strategy")
    value = 1.0 / u.sum() - shift
    return GameSolution(u / u.sum(), w / w.sum(), float(value))


def _lottery_from_strategy(
    alternatives: tuple[str, ...], strategy: np.ndarray, epsilon: float = SUPPORT_EPSILON
) -> Lottery:
    """Zero out numerical dust below epsilon and renormalize."""
    probs = np.where(strategy > epsilon, strategy, 0.0)
    total = probs.sum()
    if total <= 0:
        raise SolverError("strategy support vanished after epsilon filtering")
    probs = probs / total
    return Lottery({a: float(p) for a, p in zip(alternatives, probs)})


def maximal_lottery(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> Lottery:
    """Maximin strategy of the profile's margin game."""
    margins = margin_matrix(profile)
    solution = solve_zero_sum(margins.margins.astype(float))
    return _lottery_from_strategy(profile.alternatives, solution.row_strategy)


def maximal_lottery_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> tuple[RankingResult, Lottery]:
    """Total order by lottery probability (seeded tiebreak among equals)."""
    policy = policy or TieBreakPolicy()
    lottery = maximal_lottery(profile)
    order = sorted(
        profile.alternatives,
        key=lambda a: (-(lottery[a] + policy.offset(a)), profile.index(a)),
    )
    scores = {a: lottery[a] for a in profile.alternatives}
    return ranking_from_order(order, scores, "maximal_lottery", policy), lottery


def iterative_maximal_lotteries(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> IterativeLotteryResult:
    """Solve the margin game, remove the winners, recurse on the subgame.

    Round t's game is the margin submatrix over the survivors, which equals
    the margin matrix of the winner-deleted profile (deleting alternatives
    cannot change strict-preference counts between survivors).
    """
    policy = policy or TieBreakPolicy()
    full = margin_matrix(profile).margins.astype(float)
    alternatives = list(profile.alternatives)
    live = list(range(len(alternatives)))
    levels: list[LotteryLevel] = []
    while live:
        sub = full[np.ix_(live, live)]
        solution = solve_zero_sum(sub)
        names = tuple(alternatives[i] for i in live)
        lottery = _lottery_from_strategy(names, solution.row_strategy)
        winners = lottery.support(epsilon=0.0)
        levels.append(LotteryLevel(frozenset(winners), lottery))
        live = [i for i in live if alternatives[i] not in winners]

    num_levels = len(levels)
    scores: dict[str, float] = {}
    for t, level in enumerate(levels):
        level_value = num_levels - 1 - t
        for alt in level.winners:
            scores[alt] = level_value + level.lottery[alt]
    return IterativeLotteryResult(tuple(levels), scores)


def iml_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None
) -> tuple[RankingResult, IterativeLotteryResult]:
    policy = policy or TieBreakPolicy()
    result = iterative_maximal_lotteries(profile, policy)
    order = sorted(
        profile.alternatives,
        key=lambda a: (-(result.scores[a] + policy.offset(a)), profile.index(a)),
    )
    return ranking_from_order(order, result.scores, "iml", policy), result
