"""Parsing and serialization: ballot files, score tables, game-record CSVs,
DOT export of the ranked-pairs graph, and the line-oriented report format."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Sequence, Union

import numpy as np

from .condorcet import RankedPairsGraph
from .errors import DataError
from .harness import GameRecord
from .profiles import Ballot, MarginMatrix, PreferenceMatrix, PreferenceProfile, RankingResult
from .tables import ScoreTable

Text = Union[str, bytes]


def _as_text(data: Text) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_score_table(data: Text) -> ScoreTable:
    """CSV with task names on the first row and agent names in the first
    column; empty cells are missing entries."""
    rows = list(csv.reader(_io.StringIO(_as_text(data))))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise DataError("score table needs a header row and at least one agent row")
    tasks = [cell.strip() for cell in rows[0][1:]]
    if any(not t for t in tasks):
        raise DataError("empty task name in header row")
    if len(set(tasks)) != len(tasks):
        raise DataError("duplicate task name in header row")
    agents: list[str] = []
    scores = np.full((len(rows) - 1, len(tasks)), np.nan)
    for r, row in enumerate(rows[1:], start=2):
        name = row[0].strip()
        if not name:
            raise DataError(f"row {r}: empty agent name")
        if name in agents:
            raise DataError(f"row {r}: duplicate agent name {name!r}")
        if len(row) - 1 != len(tasks):
            raise DataError(f"row {r}: expected {len(tasks)} score cells, got {len(row) - 1}")
        agents.append(name)
        for c, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if not cell:
                continue
            try:
                value = float(cell)
            except ValueError:
                raise DataError(f"row {r}, column {c}: unparseable number {cell!r}") from None
            if not math.isfinite(value):
                raise DataError(f"row {r}, column {c}: non-finite score {cell!r}")
            scores[r - 2, c - 2] = value
    return ScoreTable(tuple(agents), tuple(tasks), scores)


def parse_ballots(data: Text) -> PreferenceProfile:
    """Ballot file: one `<weight>: a > b = c > d` line per ballot.

    `>` separates strictly ordered groups, `=` ties alternatives within a
    group, `#` starts a comment. The alternative registry is the order of
    first appearance.
    """
    alternatives: list[str] = []
    seen: set[str] = set()
    ballots: list[Ballot] = []
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise DataError(f"line {lineno}: expected '<weight>: ranking'")
        try:
            weight = int(head.strip())
        except ValueError:
            raise DataError(f"line {lineno}: bad weight {head.strip()!r}") from None
        if weight < 1:
            raise DataError(f"line {lineno}: weight must be >= 1, got {weight}")
        groups: list[frozenset[str]] = []
        for chunk in tail.split(">"):
            names = [n.strip() for n in chunk.split("=")]
            if any(not n for n in names):
                raise DataError(f"line {lineno}: empty alternative name")
            if len(set(names)) != len(names):
                raise DataError(f"line {lineno}: alternative repeated within a group")
            groups.append(frozenset(names))
            for n in names:
                if n not in seen:
                    seen.add(n)
                    alternatives.append(n)
        try:
            ballots.append(Ballot(tuple(groups), weight))
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
    if not ballots:
        raise DataError("ballot file contains no ballots")
    return PreferenceProfile(tuple(alternatives), tuple(ballots))


def format_ballots(profile: PreferenceProfile) -> str:
    """Inverse of parse_ballots (group members serialized in sorted order)."""
    lines = []
    for ballot in profile.ballots:
        ranking = " > ".join(" = ".join(sorted(g)) for g in ballot.groups)
        lines.append(f"{ballot.weight}: {ranking}")
    return "\n".join(lines) + "\n"


def parse_game_records(data: Text) -> list[GameRecord]:
    """CSV with columns game_id, agent_id, score (header optional)."""
    rows = list(csv.reader(_io.StringIO(_as_text(data))))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if rows and [c.strip().lower() for c in rows[0][:3]] == ["game_id", "agent_id", "score"]:
        rows = rows[1:]
    if not rows:
        raise DataError("game file contains no records")
    per_game: dict[str, list[tuple[str, float]]] = {}
    order: list[str] = []
    seen_pairs: set[tuple[str, str]] = set()
    for lineno, row in enumerate(rows, start=1):
        if len(row) < 3:
            raise DataError(f"game row {lineno}: expected game_id, agent_id, score")
        game, agent, cell = row[0].strip(), row[1].strip(), row[2].strip()
        if not game or not agent:
            raise DataError(f"game row {lineno}: empty game or agent id")
        if (game, agent) in seen_pairs:
            raise DataError(f"game row {lineno}: repeated pair ({game}, {agent})")
        seen_pairs.add((game, agent))
        try:
            score = float(cell)
        except ValueError:
            raise DataError(f"game row {lineno}: bad score {cell!r}") from None
        if game not in per_game:
            per_game[game] = []
            order.append(game)
        per_game[game].append((agent, score))
    return [GameRecord(g, tuple(per_game[g])) for g in order]


def export_dot(graph: RankedPairsGraph) -> str:
    """Deterministic DOT text: nodes in registry order, directed edges labeled
    with their margins, byte-identical across runs for identical input."""
    lines = ["digraph ranked_pairs {"]
    for node in graph.nodes:
        lines.append(f'  "{node}";')
    for a, b, w in graph.edges:
        lines.append(f'  "{a}" -> "{b}" [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def matrix_csv(matrix: Union[PreferenceMatrix, MarginMatrix]) -> str:
    """Pairwise count or margin matrix as CSV with row/column labels."""
    values = matrix.counts if isinstance(matrix, PreferenceMatrix) else matrix.margins
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + list(matrix.alternatives))
    for i, alt in enumerate(matrix.alternatives):
        writer.writerow([alt] + [int(v) for v in values[i]])
    return out.getvalue()


def _sig6(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.6g}"


class Report:
    """Ordered key/value report with a line-oriented text rendering and a
    field-for-field JSON mirror."""

    def __init__(self) -> None:
        self.fields: list[tuple[str, object]] = []

    def add(self, key: str, value: object) -> "Report":
        self.fields.append((key, value))
        return self

    def to_text(self) -> str:
        lines = []
        for key, value in self.fields:
            if isinstance(value, float):
                value = _sig6(value)
            lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(dict(self.fields), indent=2, default=str) + "\n"


def ranking_report(result: RankingResult) -> Report:
    report = Report()
    report.add("method", result.method)
    report.add("seed", result.tiebreak_seed)
    for entry in result.entries:
        report.add(f"rank.{entry.rank}", f"{entry.alternative} {_sig6(entry.score)}")
    return report


def parse_ranking_report(text: str) -> RankingResult:
    """Inverse of ranking_report's text rendering (round-trip check support)."""
    from .profiles import RankEntry

    method = None
    seed = 0
    entries = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(": ")
        if key == "method":
            method = value
        elif key == "seed":
            seed = int(value)
        elif key.startswith("rank."):
            rank = int(key.split(".", 1)[1])
            alt, _, score = value.rpartition(" ")
            entries.append(RankEntry(rank, alt, float(score)))
    if method is None:
        raise DataError("report has no method line")
    return RankingResult(method, tuple(entries), seed)


def parse_weights(data: Text) -> dict[int, int]:
    """Ballot replication weights: `<ballot index> <factor>` per line."""
    weights: dict[int, int] = {}
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"weights line {lineno}: expected '<index> <factor>'")
        try:
            idx, factor = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"weights line {lineno}: non-integer entry") from None
        weights[idx] = factor
    return weights
