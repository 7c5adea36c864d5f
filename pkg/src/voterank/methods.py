"""Name-indexed access to every ranking method, sharing one tie-break policy."""

from __future__ import annotations

from typing import Callable, Optional

from .baselines import elo_rank
from .condorcet import copeland_rank, kemeny_rank, ranked_pairs_rank, schulze_rank
from .errors import UsageError
from .lotteries import iml_rank, maximal_lottery_rank
from .profiles import PreferenceProfile, RankingResult
from .scoring import approval_rank, borda_rank, plurality_rank, stv_rank
from .tiebreak import TieBreakPolicy

PROFILE_METHODS = (
    "plurality",
    "approval",
    "borda",
    "stv",
    "copeland",
    "kemeny",
    "schulze",
    "ranked_pairs",
    "maximal_lottery",
    "iml",
    "elo",
)


def rank_with(
    method: str,
    profile: PreferenceProfile,
    policy: Optional[TieBreakPolicy] = None,
    k: Optional[int] = None,
    num_winners: Optional[int] = None,
) -> RankingResult:
    """Run one method by name, returning just its RankingResult."""
    policy = policy or TieBreakPolicy()
    if method == "plurality":
        return plurality_rank(profile, policy)
    if method == "approval":
        if k is None:
            raise UsageError("approval requires k")
        return approval_rank(profile, k, policy)
    if method == "borda":
        return borda_rank(profile, policy)
    if method == "stv":
        return stv_rank(profile, num_winners, policy)[0]
    if method == "copeland":
        return copeland_rank(profile, policy)
    if method == "kemeny":
        return kemeny_rank(profile, policy)
    if method == "schulze":
        return schulze_rank(profile, policy)[0]
    if method == "ranked_pairs":
        return ranked_pairs_rank(profile, policy)[0]
    if method == "maximal_lottery":
        return maximal_lottery_rank(profile, policy)[0]
    if method == "iml":
        return iml_rank(profile, policy)[0]
    if method == "elo":
        return elo_rank(profile, policy)
    raise UsageError(f"unknown method {method!r} (choose from {', '.join(PROFILE_METHODS)})")
