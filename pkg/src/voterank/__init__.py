"""Rank aggregation for agent evaluation: voting rules over per-task rankings,
maximal lotteries, and Elo / Nash-averaging baselines."""

from .baselines import (
    EloRatings,
    NashAverageResult,
    WinRecord,
    elo_fit,
    elo_from_profile,
    elo_predict,
    elo_rank,
    nash_average,
    nash_average_rank,
    normalize_scores,
)
from .condorcet import (
    KEMENY_MAX_ALTERNATIVES,
    RankedPairsGraph,
    StrongestPathMatrix,
    copeland_rank,
    kemeny_rank,
    kemeny_value,
    ranked_pairs_rank,
    schulze_rank,
    strongest_paths,
)
from .errors import CapacityError, DataError, SolverError, UsageError
from .harness import (
    CheckReport,
    GameRecord,
    SplitSpec,
    check_clone_consistency,
    check_condorcet_consistency,
    check_population_consistency,
    count_unique_votes,
    error_per_game,
    inject_clones,
    kendall_tau,
    profile_from_games,
    random_profile,
    split_error_experiment,
    synthetic_game_corpus,
)
from .io import (
    export_dot,
    format_ballots,
    matrix_csv,
    parse_ballots,
    parse_game_records,
    parse_ranking_report,
    parse_score_table,
    ranking_report,
)
from .lotteries import (
    GameSolution,
    IterativeLotteryResult,
    Lottery,
    LotteryLevel,
    iml_rank,
    iterative_maximal_lotteries,
    maximal_lottery,
    maximal_lottery_rank,
    solve_zero_sum,
)
from .methods import PROFILE_METHODS, rank_with
from .profiles import (
    Ballot,
    MarginMatrix,
    PreferenceMatrix,
    PreferenceProfile,
    RankEntry,
    RankingResult,
    ballots_from_score_rows,
    condorcet_winner,
    margin_matrix,
    preference_matrix,
    replicate_ballots,
)
from .scoring import (
    ScoringVector,
    StvRound,
    StvTrace,
    approval_rank,
    borda_rank,
    borda_vector,
    default_num_winners,
    plurality_rank,
    plurality_vector,
    positional_rank,
    stv_rank,
)
from .tables import ScoreTable
from .tiebreak import TieBreakPolicy

__version__ = "0.1.0"
