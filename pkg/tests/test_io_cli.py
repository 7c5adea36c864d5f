import re

import numpy as np
import pytest

from voterank import (
    DataError,
    TieBreakPolicy,
    export_dot,
    format_ballots,
    matrix_csv,
    parse_ballots,
    parse_game_records,
    parse_ranking_report,
    parse_score_table,
    preference_matrix,
    ranked_pairs_rank,
    ranking_report,
    rank_with,
)
from voterank.cli import main

PENTATHLON_TEXT = """\
# comment line
1: A > B > C
1: A > C > B
2: C > A > B
1: B > C > A
"""


def independent_dot_parse(text):
    """Regex-based DOT reader used only by tests (round-trip independence)."""
    nodes = set(re.findall(r'^\s*"([^"]+)";\s*$', text, re.M))
    edges = {
        (a, b, int(w))
        for a, b, w in re.findall(r'"([^"]+)" -> "([^"]+)" \[label="(-?\d+)"\]', text)
    }
    return nodes, edges


class TestParseBallots:
    def test_pentathlon_counts(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        assert profile.alternatives == ("A", "B", "C")
        n = preference_matrix(profile).counts
        assert np.array_equal(n, np.array([[0, 4, 2], [1, 0, 2], [3, 3, 0]]))

    def test_tie_groups(self):
        profile = parse_ballots("2: a = b > c\n")
        assert profile.ballots[0].groups == (frozenset(["a", "b"]), frozenset(["c"]))
        assert profile.ballots[0].weight == 2

    def test_duplicate_alternative_line_number(self):
        with pytest.raises(DataError, match="line 2"):
            parse_ballots("1: A > B\n1: A > A\n")

    def test_missing_weight_rejected(self):
        with pytest.raises(DataError, match="line 1"):
            parse_ballots("A > B\n")

    def test_bad_weight_rejected(self):
        with pytest.raises(DataError, match="line 1"):
            parse_ballots("x: A > B\n")

    def test_round_trip(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        assert parse_ballots(format_ballots(profile)) == profile


class TestParseScoreTable:
    def test_basic_table(self):
        table = parse_score_table("agent,t1,t2\nx,1.5,2\ny,0,\nz,3,4\n")
        assert table.agents == ("x", "y", "z")
        assert table.tasks == ("t1", "t2")
        assert np.isnan(table.scores[1, 1])
        assert table.scores[0, 0] == 1.5

    def test_duplicate_agent_rejected(self):
        with pytest.raises(DataError, match="row 3"):
            parse_score_table(",t1\nx,1\nx,2\n")

    def test_unparseable_cell_coordinates(self):
        with pytest.raises(DataError, match="row 2, column 3"):
            parse_score_table(",t1,t2\nx,1,oops\n")

    def test_nan_cell_rejected(self):
        with pytest.raises(DataError, match="row 2"):
            parse_score_table(",t1\nx,NaN\n")


class TestParseGameRecords:
    def test_grouping_with_header(self):
        text = "game_id,agent_id,score\ng1,a,2\ng1,b,1\ng2,a,1\ng2,c,3\n"
        games = parse_game_records(text)
        assert [g.game_id for g in games] == ["g1", "g2"]
        assert games[0].participants == (("a", 2.0), ("b", 1.0))

    def test_repeated_pair_rejected(self):
        with pytest.raises(DataError, match="repeated pair"):
            parse_game_records("g1,a,2\ng1,a,1\ng1,b,0\n")

    def test_bad_score_rejected(self):
        with pytest.raises(DataError, match="bad score"):
            parse_game_records("g1,a,two\ng1,b,1\n")


class TestExportDot:
    def test_pentathlon_graph(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        _, graph = ranked_pairs_rank(profile)
        text = export_dot(graph)
        nodes, edges = independent_dot_parse(text)
        assert nodes == {"A", "B", "C"}
        assert edges == {("A", "B", 3), ("C", "A", 1), ("C", "B", 1)}

    def test_byte_identical_across_runs(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        first = export_dot(ranked_pairs_rank(profile)[1])
        second = export_dot(ranked_pairs_rank(profile)[1])
        assert first == second


class TestReports:
    def test_ranking_report_round_trip(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        result = rank_with("copeland", profile, TieBreakPolicy(3))
        text = ranking_report(result).to_text()
        assert parse_ranking_report(text) == result

    def test_matrix_csv_labels(self):
        profile = parse_ballots(PENTATHLON_TEXT)
        text = matrix_csv(preference_matrix(profile))
        lines = text.strip().splitlines()
        assert lines[0] == ",A,B,C"
        assert lines[1] == "A,0,4,2"


@pytest.fixture
def ballot_file(tmp_path):
    path = tmp_path / "profile.ballots"
    path.write_text(PENTATHLON_TEXT)
    return str(path)


class TestCli:
    def test_rank_borda(self, ballot_file, capsys):
        assert main(["rank", ballot_file, "--method", "borda"]) == 0
        out = capsys.readouterr().out
        assert "method: borda" in out
        assert "rank.1: A 6" in out

    def test_rank_unknown_method_is_usage_error(self, ballot_file, capsys):
        assert main(["rank", ballot_file, "--method", "mystery"]) == 2

    def test_rank_approval_without_k_is_usage_error(self, ballot_file):
        assert main(["rank", ballot_file, "--method", "approval"]) == 2

    def test_missing_file_is_data_error(self):
        assert main(["rank", "/nonexistent/x.ballots", "--method", "borda"]) == 3

    def test_malformed_ballots_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.ballots"
        bad.write_text("1: A > A\n")
        assert main(["rank", str(bad), "--method", "borda"]) == 3

    def test_seed_determinism_byte_identical(self, ballot_file, capsys):
        main(["rank", ballot_file, "--method", "all", "--k", "2", "--seed", "5"])
        first = capsys.readouterr().out
        main(["rank", ballot_file, "--method", "all", "--k", "2", "--seed", "5"])
        second = capsys.readouterr().out
        assert first == second

    def test_json_variant_mirrors_fields(self, ballot_file, capsys):
        import json

        main(["rank", ballot_file, "--method", "copeland", "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "copeland"
        assert payload["rank.1"] == "C 2"

    def test_matrix_command(self, ballot_file, capsys):
        assert main(["matrix", ballot_file, "--matrix", "margins"]) == 0
        out = capsys.readouterr().out
        assert "A,0,3,-1" in out

    def test_diversity_command(self, ballot_file, capsys):
        assert main(["diversity", ballot_file]) == 0
        out = capsys.readouterr().out
        assert "distinct: 4" in out
        assert "ballots: 5" in out

    def test_export_dot_command(self, ballot_file, capsys):
        assert main(["export-dot", ballot_file]) == 0
        nodes, edges = independent_dot_parse(capsys.readouterr().out)
        assert ("A", "B", 3) in edges

    def test_consistency_command(self, capsys):
        code = main(
            [
                "consistency",
                "--property",
                "condorcet",
                "--method",
                "copeland",
                "--trials",
                "30",
                "--seed",
                "1",
            ]
        )
        assert code == 0
        assert "violations: 0" in capsys.readouterr().out

    def test_eval_command(self, tmp_path, capsys):
        from voterank import synthetic_game_corpus

        games = synthetic_game_corpus(6, 40, 4, seed=2)
        lines = ["game_id,agent_id,score"]
        for g in games:
            for agent, score in g.participants:
                lines.append(f"{g.game_id},{agent},{score}")
        path = tmp_path / "games.csv"
        path.write_text("\n".join(lines) + "\n")
        code = main(
            [
                "eval",
                str(path),
                "--method",
                "borda,copeland",
                "--splits",
                "3",
                "--train-size",
                "25",
                "--test-size",
                "10",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "error.borda:" in out
        assert "error.copeland:" in out

    def test_scores_input_format(self, tmp_path, capsys):
        path = tmp_path / "scores.csv"
        path.write_text(",t1,t2\nx,3,1\ny,2,2\nz,1,0\n")
        code = main(
            ["rank", str(path), "--method", "nash_average", "--input-format", "scores"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "method: nash_average" in out
        assert "game_value:" in out

    def test_nash_average_on_ballots_is_usage_error(self, ballot_file):
        assert main(["rank", ballot_file, "--method", "nash_average"]) == 2

    def test_weights_file(self, ballot_file, tmp_path, capsys):
        weights = tmp_path / "weights.txt"
        weights.write_text("3 10\n")  # amplify the B > C > A ballot
        main(["rank", ballot_file, "--method", "plurality", "--weights", str(weights)])
        out = capsys.readouterr().out
        assert "rank.1: B 10" in out
