"""Command-line surface: rank, matrix, diversity, consistency, eval, export-dot.

Exit codes: 0 success, 2 usage error, 3 data error, 4 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from .baselines import nash_average_rank
from .condorcet import ranked_pairs_rank
from .errors import DataError, SolverError, UsageError
from .harness import (
    SplitSpec,
    check_clone_consistency,
    check_condorcet_consistency,
    check_population_consistency,
    count_unique_votes,
    profile_from_games,
    split_error_experiment,
)
from .io import (
    Report,
    export_dot,
    matrix_csv,
    parse_ballots,
    parse_game_records,
    parse_score_table,
    parse_weights,
    ranking_report,
)
from .lotteries import iml_rank
from .methods import PROFILE_METHODS, rank_with
from .profiles import (
    PreferenceProfile,
    ballots_from_score_rows,
    margin_matrix,
    preference_matrix,
    replicate_ballots,
)
from .scoring import stv_rank
from .tables import ScoreTable
from .tiebreak import TieBreakPolicy

ALL_METHODS = PROFILE_METHODS + ("nash_average",)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _load_profile(args) -> tuple[PreferenceProfile, Optional[ScoreTable]]:
    data = _read(args.input)
    if args.input_format == "ballots":
        profile = parse_ballots(data)
        table = None
    elif args.input_format == "scores":
        table = parse_score_table(data)
        profile = ballots_from_score_rows(table)
    elif args.input_format == "games":
        profile = profile_from_games(parse_game_records(data))
        table = None
    else:
        raise UsageError(f"unknown input format {args.input_format!r}")
    if getattr(args, "weights", None):
        profile = replicate_ballots(profile, parse_weights(_read(args.weights)))
    return profile, table


def _rank_one(
    method: str,
    profile: PreferenceProfile,
    table: Optional[ScoreTable],
    policy: TieBreakPolicy,
    k: Optional[int],
    num_winners: Optional[int],
) -> Report:
    if method == "nash_average":
        if table is None:
            raise UsageError("nash_average needs --input-format scores")
        ranking, nash = nash_average_rank(table, policy)
        report = ranking_report(ranking)
        report.add("normalized", "per-task min-max")
        report.add("game_value", nash.game_value)
        report.add("max_entropy", nash.max_entropy)
        for task, p in nash.task_distribution.probabilities.items():
            if p > 0:
                report.add(f"task_weight.{task}", p)
        return report
    if method == "iml":
        ranking, result = iml_rank(profile, policy)
        report = ranking_report(ranking)
        for t, level in enumerate(result.levels, start=1):
            parts = " ".join(
                f"{a}={level.lottery[a]:.6g}" for a in sorted(level.winners)
            )
            report.add(f"level.{t}", parts)
        return report
    if method == "ranked_pairs":
        ranking, graph = ranked_pairs_rank(profile, policy)
        report = ranking_report(ranking)
        for a, b, w in graph.edges:
            report.add(f"edge.{a}>{b}", w)
        return report
    if method == "stv":
        ranking, trace = stv_rank(profile, num_winners, policy)
        report = ranking_report(ranking)
        for i, rnd in enumerate(trace.rounds, start=1):
            tallies = " ".join(f"{a}={t}" for a, t in sorted(rnd.tallies.items()))
            report.add(f"round.{i}", f"quota={rnd.quota} {rnd.event}={rnd.subject} {tallies}")
        return report
    return ranking_report(rank_with(method, profile, policy, k=k, num_winners=num_winners))


def _cmd_rank(args) -> str:
    profile, table = _load_profile(args)
    policy = TieBreakPolicy(args.seed)
    if args.method == "all":
        methods = [m for m in ALL_METHODS if m != "approval" or args.k is not None]
        if table is None:
            methods = [m for m in methods if m != "nash_average"]
        with ThreadPoolExecutor(max_workers=min(8, len(methods))) as pool:
            futures = {
                m: pool.submit(_rank_one, m, profile, table, policy, args.k, args.num_winners)
                for m in methods
            }
        chunks = [futures[m].result().to_text() for m in sorted(methods)]
        return "\n".join(chunks)
    if args.method not in ALL_METHODS:
        raise UsageError(f"unknown method {args.method!r}")
    report = _rank_one(args.method, profile, table, policy, args.k, args.num_winners)
    return report.to_json() if args.json else report.to_text()


def _cmd_matrix(args) -> str:
    profile, _ = _load_profile(args)
    parts = []
    if args.matrix in ("counts", "both"):
        parts.append("# pairwise counts\n" + matrix_csv(preference_matrix(profile)))
    if args.matrix in ("margins", "both"):
        parts.append("# margins\n" + matrix_csv(margin_matrix(profile)))
    return "\n".join(parts)


def _cmd_diversity(args) -> str:
    profile, _ = _load_profile(args)
    distinct, histogram = count_unique_votes(profile)
    report = Report()
    report.add("ballots", profile.total_weight())
    report.add("distinct", distinct)
    for i, (key, count) in enumerate(
        sorted(histogram.items(), key=lambda kv: (-kv[1], str(kv[0]))), start=1
    ):
        ranking = " > ".join(" = ".join(sorted(g)) for g in key)
        report.add(f"vote.{i}", f"{count}x {ranking}")
    return report.to_text()


def _cmd_consistency(args) -> str:
    checkers = {
        "condorcet": check_condorcet_consistency,
        "population": check_population_consistency,
        "clone": check_clone_consistency,
    }
    checker = checkers[args.property]
    result = checker(args.method, args.trials, args.seed, k=args.k or 2)
    report = Report()
    for key, value in result.to_dict().items():
        if key == "counterexamples":
            for i, example in enumerate(value, start=1):
                report.add(f"counterexample.{i}", example.replace("\n", "\\n"))
        else:
            report.add(key, value)
    return report.to_text()


def _cmd_eval(args) -> str:
    games = parse_game_records(_read(args.input))
    spec = SplitSpec(
        seed=args.seed,
        train_size=args.train_size,
        test_size=args.test_size,
        replicates=args.splits,
    )
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    for m in methods:
        base = m.partition(":")[0]
        if base not in PROFILE_METHODS:
            raise UsageError(f"unknown method {m!r}")
    reports = split_error_experiment(games, methods, spec, TieBreakPolicy(args.seed))
    out = Report()
    out.add("games", len(games))
    out.add("splits", spec.replicates)
    out.add("train_size", spec.train_size)
    out.add("test_size", spec.test_size)
    for r in reports:
        out.add(f"error.{r.method}", f"{r.mean_error:.4f} +- {r.ci95:.4f}")
        if r.dropped_participants:
            out.add(f"dropped.{r.method}", r.dropped_participants)
    return out.to_text()


def _cmd_export_dot(args) -> str:
    profile, _ = _load_profile(args)
    _, graph = ranked_pairs_rank(profile, TieBreakPolicy(args.seed))
    return export_dot(graph)


def _add_input_args(parser, formats=("ballots", "scores", "games")) -> None:
    parser.add_argument("input", help="input file path, or - for stdin")
    parser.add_argument("--input-format", choices=formats, default=formats[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--weights", help="ballot replication weights file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voterank", description="Rank alternatives from ballots, score tables, or game logs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="run one ranking method (or all)")
    _add_input_args(rank)
    rank.add_argument("--method", required=True, help=f"one of {', '.join(ALL_METHODS)}, or all")
    rank.add_argument("--k", type=int, help="approval cutoff")
    rank.add_argument("--num-winners", type=int, help="seats for STV")
    rank.add_argument("--json", action="store_true", help="emit the JSON report variant")

    matrix = sub.add_parser("matrix", help="print pairwise count/margin matrices as CSV")
    _add_input_args(matrix)
    matrix.add_argument("--matrix", choices=("counts", "margins", "both"), default="both")

    diversity = sub.add_parser("diversity", help="count distinct ballots")
    _add_input_args(diversity)

    consistency = sub.add_parser("consistency", help="run a consistency-property suite")
    consistency.add_argument("--property", choices=("condorcet", "population", "clone"), required=True)
    consistency.add_argument("--method", required=True)
    consistency.add_argument("--trials", type=int, default=1000)
    consistency.add_argument("--seed", type=int, default=0)
    consistency.add_argument("--k", type=int, help="approval cutoff")

    ev = sub.add_parser("eval", help="train/test split ranking-error experiment")
    ev.add_argument("input", help="game-record CSV path, or - for stdin")
    ev.add_argument("--method", required=True, help="comma-separated method list")
    ev.add_argument("--splits", type=int, default=50)
    ev.add_argument("--train-size", type=int, required=True)
    ev.add_argument("--test-size", type=int, required=True)
    ev.add_argument("--seed", type=int, default=0)

    dot = sub.add_parser("export-dot", help="ranked-pairs graph as DOT")
    _add_input_args(dot)
    return parser


_COMMANDS = {
    "rank": _cmd_rank,
    "matrix": _cmd_matrix,
    "diversity": _cmd_diversity,
    "consistency": _cmd_consistency,
    "eval": _cmd_eval,
    "export-dot": _cmd_export_dot,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(_COMMANDS[args.command](args))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
