"""Rating baselines: batch-fitted Elo and Nash averaging.

Both are cardinal systems the voting rules are compared against. Elo fits a
base-10 logistic model to aggregate win rates with full-batch updates. Nash
averaging ranks agents by their expected normalized score against the
maximum-entropy equilibrium task distribution of the agent-vs-task zero-sum
game.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import DataError, SolverError
from .lotteries import Lottery, solve_zero_sum
from .profiles import PreferenceProfile, RankingResult, ranking_from_scores
from .tables import ScoreTable
from .tiebreak import TieBreakPolicy

DEFAULT_K = 32.0
DEFAULT_GRAD_TOL = 1e-10
DEFAULT_MAX_ITERS = 10**6


@dataclass(frozen=True)
class WinRecord:
    """Aggregate head-to-head outcomes: (i, j) -> (wins of i over j, games played)."""

    pairs: dict[tuple[str, str], tuple[float, float]]

    def agents(self) -> list[str]:
        names: list[str] = []
        for i, j in self.pairs:
            for name in (i, j):
                if name not in names:
                    names.append(name)
        return names

    def win_rate(self, i: str, j: str) -> float:
        if (i, j) in self.pairs:
            wins, total = self.pairs[(i, j)]
            return wins / total
        wins, total = self.pairs[(j, i)]
        return (total - wins) / total


@dataclass(frozen=True)
class EloRatings:
    ratings: dict[str, float]
    k_factor: float
    anchor: str  # agent pinned at rating 0 (the minimum)
    converged: bool
    iterations: int
    history: tuple[dict[str, float], ...] = ()

    def gap(self, i: str, j: str) -> float:
        return self.ratings[i] - self.ratings[j]


def elo_predict(r_i: float, r_j: float) -> float:
    """Predicted probability that i beats j under the base-10 logistic model."""
    if not (np.isfinite(r_i) and np.isfinite(r_j)):
        raise DataError("ratings must be finite")
    return 1.0 / (1.0 + 10.0 ** ((r_j - r_i) / 400.0))


def _win_matrices(records: WinRecord) -> tuple[list[str], np.ndarray, np.ndarray]:
    agents = records.agents()
    index = {a: k for k, a in enumerate(agents)}
    n = len(agents)
    wins = np.zeros((n, n))
    totals = np.zeros((n, n))
    for (i, j), (w, t) in records.pairs.items():
        if not (0 <= w <= t) or t <= 0:
            raise DataError(f"bad win record for ({i}, {j}): wins={w}, total={t}")
        a, b = index[i], index[j]
        wins[a, b] += w
        wins[b, a] += t - w
        totals[a, b] += t
        totals[b, a] += t
    return agents, wins, totals


def elo_fit(
    records: WinRecord,
    k_factor: float = DEFAULT_K,
    max_iters: int = DEFAULT_MAX_ITERS,
    grad_tol: float = DEFAULT_GRAD_TOL,
    keep_history: bool = False,
) -> EloRatings:
    """Full-batch Elo updates from equal initial ratings until the largest
    per-agent update falls below grad_tol.

    Fractional win counts are allowed (win-rate data). The result is
    re-anchored so the minimum rating is exactly 0; non-convergence is flagged
    on the result rather than raised.
    """
    if not records.pairs:
        raise DataError("win record is empty")
    if k_factor <= 0:
        raise DataError("k_factor must be positive")
    agents, wins, totals = _win_matrices(records)
    n = len(agents)
    r = np.zeros(n)
    history: list[dict[str, float]] = []
    converged = False
    iterations = 0
    # The summed per-game update overshoots wildly when an agent has many
    # games, so the batch step is averaged over each agent's game count.
    # Positive per-agent scaling leaves the fixed point (the maximum
    # likelihood ratings) unchanged.
    games_played = np.maximum(totals.sum(axis=1), 1.0)
    for iterations in range(1, max_iters + 1):
        diff = r[:, None] - r[None, :]
        expected = 1.0 / (1.0 + 10.0 ** (-diff / 400.0))
        delta = k_factor * (wins - totals * expected).sum(axis=1) / games_played
        r = r + delta
        if keep_history:
            history.append({a: float(v) for a, v in zip(agents, r)})
        if np.max(np.abs(delta)) < grad_tol:
            converged = True
            break
    low = int(np.argmin(r))
    r = r - r[low]
    return EloRatings(
        ratings={a: float(v) for a, v in zip(agents, r)},
        k_factor=k_factor,
        anchor=agents[low],
        converged=converged,
        iterations=iterations,
        history=tuple(history),
    )


def elo_from_profile(profile: PreferenceProfile) -> WinRecord:
    """Every strict pairwise preference in a ballot is one head-to-head win;
    a tie within a group counts half a win each way."""
    pairs: dict[tuple[str, str], list[float]] = {}

    def bump(x: str, y: str, win: float, games: float) -> None:
        key = (x, y) if (x, y) in pairs or (y, x) not in pairs else None
        if key is None:
            wins, total = pairs[(y, x)]
            pairs[(y, x)] = [wins + games - win, total + games]
        else:
            entry = pairs.setdefault(key, [0.0, 0.0])
            entry[0] += win
            entry[1] += games

    for ballot in profile.ballots:
        w = float(ballot.weight)
        flat: list[tuple[str, int]] = []
        for gi, group in enumerate(ballot.groups):
            for alt in sorted(group):
                flat.append((alt, gi))
        for i in range(len(flat)):
            for j in range(i + 1, len(flat)):
                (x, gx), (y, gy) = flat[i], flat[j]
                if gx < gy:
                    bump(x, y, w, w)
                elif gx > gy:
                    bump(y, x, w, w)
                else:
                    bump(x, y, 0.5 * w, w)
    return WinRecord({k: (v[0], v[1]) for k, v in pairs.items()})


def elo_rank(
    profile: PreferenceProfile, policy: Optional[TieBreakPolicy] = None, **fit_kwargs
) -> RankingResult:
    """Ranking by fitted Elo rating (pairwise wins harvested from the profile)."""
    policy = policy or TieBreakPolicy()
    record = elo_from_profile(profile)
    involved = set(record.agents())
    fitted = elo_fit(record, **fit_kwargs) if record.pairs else None
    scores = {}
    for alt in profile.alternatives:
        scores[alt] = fitted.ratings[alt] if fitted and alt in involved else 0.0
    return ranking_from_scores(profile, scores, "elo", policy)


def normalize_scores(table: ScoreTable) -> ScoreTable:
    """Min-max normalize each task column into [0, 1]; constant columns map to 0.5."""
    scores = table.scores.astype(float).copy()
    for j in range(scores.shape[1]):
        col = scores[:, j]
        present = ~np.isnan(col)
        if not present.any():
            continue
        lo, hi = col[present].min(), col[present].max()
        if hi == lo:
            scores[present, j] = 0.5
        else:
            scores[present, j] = (col[present] - lo) / (hi - lo)
    return ScoreTable(table.agents, table.tasks, scores)


@dataclass(frozen=True)
class NashAverageResult:
    agent_distribution: Lottery
    task_distribution: Lottery
    agent_values: dict[str, float]
    game_value: float
    max_entropy: bool  # False when the LP-vertex fallback was used

    def ranking(self, policy: Optional[TieBreakPolicy] = None) -> list[str]:
        policy = policy or TieBreakPolicy()
        return sorted(
            self.agent_values,
            key=lambda a: -(self.agent_values[a] + policy.offset(a)),
        )


def _max_entropy_on_face(
    constraint_matrix: np.ndarray, value: float, sense: str, start: np.ndarray
) -> Optional[np.ndarray]:
    """Maximize Shannon entropy over {p in simplex : C p >= v} (or <= v).

    Returns None when the convex solve fails; callers fall back to the LP
    vertex `start`.
    """
    import cvxpy as cp

    n = constraint_matrix.shape[1]
    p = cp.Variable(n)
    constraints = [cp.sum(p) == 1, p >= 0]
    slack = 1e-8
    if sense == ">=":
        constraints.append(constraint_matrix @ p >= value - slack)
    else:
        constraints.append(constraint_matrix @ p <= value + slack)
    problem = cp.Problem(cp.Maximize(cp.sum(cp.entr(p))), constraints)
    try:
        problem.solve(
            solver=cp.CLARABEL,
            tol_gap_abs=1e-10,
            tol_gap_rel=1e-10,
            tol_feas=1e-10,
        )
    except cp.error.SolverError:
        return None
    if p.value is None or problem.status not in ("optimal", "optimal_inaccurate"):
        return None
    solution = np.maximum(np.asarray(p.value).ravel(), 0.0)
    total = solution.sum()
    if total <= 0:
        return None
    return solution / total


def nash_average(table: ScoreTable) -> NashAverageResult:
    """Maximum-entropy equilibrium of the agent-vs-task zero-sum game.

    The agent player maximizes x^T S y, the task player minimizes. The game
    value comes from an LP solve; each player's strategy is then re-selected
    as the entropy maximizer over its optimal-strategy polytope. Agents are
    valued by S y* (expected score against the equilibrium task mix).
    """
    if not table.is_complete():
        raise DataError("Nash averaging needs a complete score table (no missing entries)")
    s = table.scores.astype(float)
    solution = solve_zero_sum(s)
    value = solution.value

    x = _max_entropy_on_face(s.T, value, ">=", solution.row_strategy)
    y = _max_entropy_on_face(s, value, "<=", solution.column_strategy)
    max_entropy = x is not None and y is not None
    if x is None:
        x = solution.row_strategy
    if y is None:
        y = solution.column_strategy

    # The entropy solve works on a slightly slackened face, which can leak
    # tiny mass onto rows/columns no exact equilibrium supports. Complementary
    # slackness against the (high-precision) LP vertex identifies and removes
    # that leakage: a row with mass must be tight against every optimal
    # column strategy, and symmetrically for columns.
    def _clean(strategy, keep_mask):
        cleaned = np.where(keep_mask, strategy, 0.0)
        return cleaned / cleaned.sum() if cleaned.sum() > 0 else strategy

    x = _clean(x, s @ solution.column_strategy >= value - 1e-6)
    y = _clean(y, solution.row_strategy @ s <= value + 1e-6)

    # Numerical polish: the convex solver leaves ~1e-7 slack, so project y
    # onto the exact equality face for the agents the equilibrium supports
    # (their expected values must equal the game value exactly).
    support_rows = x > 1e-6
    if support_rows.any():
        c = np.vstack([s[support_rows], np.ones(len(y))])
        d = np.concatenate([np.full(int(support_rows.sum()), value), [1.0]])
        correction, *_ = np.linalg.lstsq(c, d - c @ y, rcond=None)
        polished = np.maximum(y + correction, 0.0)
        if np.linalg.norm(polished - y, np.inf) < 1e-4:
            y = polished / polished.sum()

    agent_values = s @ y
    return NashAverageResult(
        agent_distribution=Lottery(
            {a: float(p) for a, p in zip(table.agents, x / x.sum())}
        ),
        task_distribution=Lottery(
            {t: float(p) for t, p in zip(table.tasks, y / y.sum())}
        ),
        agent_values={a: float(v) for a, v in zip(table.agents, agent_values)},
        game_value=float(value),
        max_entropy=max_entropy,
    )


def nash_average_rank(
    table: ScoreTable, policy: Optional[TieBreakPolicy] = None, normalize: bool = True
) -> tuple[RankingResult, NashAverageResult]:
    policy = policy or TieBreakPolicy()
    prepared = normalize_scores(table) if normalize else table
    result = nash_average(prepared)
    ranking = ranking_from_scores(
        PreferenceProfile(tuple(table.agents)), result.agent_values, "nash_average", policy
    )
    return ranking, result
