import json
import logging

import pytest

from main import run
from modules.handlers.core.commands import EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_USAGE
from modules.reasoning.oracles import make_complete_tree
from modules.reasoning.tree import save_tree


def report_lines(capsys):
    out = capsys.readouterr().out
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def reasons_by_kind(report):
    return {(r["kind"], r["delta"]): r["term"] for r in report["reasons"]}


class TestExplainCommand:
    def test_cattleya(self, cattleya_path, capsys):
        code = run(["explain", "--tree", str(cattleya_path), "--instance", "1111",
                    "--kinds", "all", "--delta", "3/4"])
        assert code == EXIT_OK
        [report] = report_lines(capsys)
        reasons = reasons_by_kind(report)
        assert reasons[("direct", "1/1")] == [1, 2, 3, 4]
        assert reasons[("sufficient", "1/1")] == [1, 4]
        assert reasons[("minimal", "1/1")] == [1, 4]
        assert reasons[("probable", "3/4")] == [1, 4]
        assert report["contrastive"]["terms"] == [[1, 2], [1, 3], [4]]
        assert report["features"]["necessary"] == [4]
        assert report["features"]["relevant"] == [1, 2, 3, 4]
        assert report["importance"]["count"] == 2
        assert report["importance"]["importance"] == [[1, "1/2"], [2, "1/2"], [3, "1/2"], [4, "1/1"]]

    def test_delta_one_is_the_sufficient_reason(self, cattleya_path, capsys):
        run(["explain", "--tree", str(cattleya_path), "--instance", "1111",
             "--kinds", "sufficient,probable", "--delta", "1/1"])
        [report] = report_lines(capsys)
        reasons = reasons_by_kind(report)
        assert reasons[("probable", "1/1")] == reasons[("sufficient", "1/1")]

    def test_index_order(self, cattleya_path, capsys):
        run(["explain", "--tree", str(cattleya_path), "--instance", "1,1,1,1",
             "--kinds", "sufficient", "--order", "index"])
        [report] = report_lines(capsys)
        assert reasons_by_kind(report)[("sufficient", "1/1")] == [2, 3, 4]

    def test_cap_marks_enumeration_incomplete(self, tmp_path, capsys):
        path = tmp_path / "complete.json"
        tree = make_complete_tree(3)
        save_tree(path, tree)
        code = run(["explain", "--tree", str(path), "--instance", "1" * tree.n,
                    "--kinds", "all-sufficient", "--cap", "1"])
        assert code == EXIT_OK
        [report] = report_lines(capsys)
        assert report["enumerations"]["all-sufficient"]["complete"] is False
        assert report["enumerations"]["all-sufficient"]["count"] == 1

    def test_instances_file_and_outputs(self, tmp_path, cattleya_path):
        instances = tmp_path / "instances.txt"
        instances.write_text("# cattleya\n1111\n1000\n\n0111\n", encoding="utf-8")
        out = tmp_path / "reports.jsonl"
        stats = tmp_path / "stats.json"
        importance = tmp_path / "importance"
        code = run(["explain", "--tree", str(cattleya_path), "--instances", str(instances),
                    "--kinds", "minimal,importance", "--out", str(out), "--stats", str(stats),
                    "--importance-dir", str(importance)])
        assert code == EXIT_OK
        reports = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
        assert [r["prediction"] for r in reports] == [1, 0, 1]
        assert json.loads(stats.read_text(encoding="utf-8"))["instances"] == 3
        assert sorted(p.name for p in importance.iterdir()) == [
            "instance_0000.csv", "instance_0001.csv", "instance_0002.csv",
        ]

    def test_contrastive_kind_alone(self, cattleya_path, capsys):
        code = run(["explain", "--tree", str(cattleya_path), "--instance", "1111", "--kinds", "contrastive"])
        assert code == EXIT_OK
        [report] = report_lines(capsys)
        assert report["contrastive"]["terms"] == [[1, 2], [1, 3], [4]]
        assert "features" not in report
        assert report["reasons"] == []

    def test_contrastive_features_preset(self, cattleya_path, capsys):
        run(["explain", "--tree", str(cattleya_path), "--instance", "1111", "--kinds", "contrastive-features"])
        [report] = report_lines(capsys)
        assert "contrastive" in report
        assert report["features"]["necessary"] == [4]

    def test_reasons_are_logged(self, cattleya_path, capsys, caplog):
        caplog.set_level(logging.INFO, logger="modules.handlers.explain.handlers")
        run(["explain", "--tree", str(cattleya_path), "--instance", "1111", "--kinds", "minimal,contrastive"])
        assert "Instance 0 minimal (δ=1/1): x1 ∧ x4" in caplog.text
        assert "Instance 0 contrastive: x1 ∧ x2 | x1 ∧ x3 | x4" in caplog.text

    def test_malformed_tree_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 1, "root": [0], "nodes": [{"id": [0], "leaf": 1}]}), encoding="utf-8")
        assert run(["explain", "--tree", str(path), "--instance", "1"]) == EXIT_INPUT

    def test_float_delta_is_refused(self, cattleya_path):
        code = run(["explain", "--tree", str(cattleya_path), "--instance", "1111",
                    "--kinds", "probable", "--delta", "0.75"])
        assert code == EXIT_INPUT

    def test_delta_and_preset_conflict(self, cattleya_path):
        code = run(["explain", "--tree", str(cattleya_path), "--instance", "1111",
                    "--delta", "1", "--delta-preset", "coarse"])
        assert code == EXIT_USAGE

    def test_missing_tree_file(self, tmp_path):
        code = run(["explain", "--tree", str(tmp_path / "absent.json"), "--instance", "1"])
        assert code == EXIT_INPUT

    def test_wrong_instance_length(self, cattleya_path):
        code = run(["explain", "--tree", str(cattleya_path), "--instance", "111"])
        assert code == EXIT_INPUT

    def test_argparse_errors_are_usage_errors(self):
        assert run(["explain", "--instance", "1111"]) == EXIT_USAGE
        assert run(["frobnicate"]) == EXIT_USAGE


class TestLearnCommand:
    def test_learn_is_deterministic(self, monk1_csv, tmp_path, capsys):
        first = tmp_path / "first"
        second = tmp_path / "second"
        for out_dir in (first, second):
            code = run(["learn", "--data", str(monk1_csv), "--label", "class",
                        "--folds", "3", "--seed", "5", "--out-dir", str(out_dir)])
            assert code == EXIT_OK
        names = sorted(p.name for p in first.iterdir())
        assert names == ["fold_01.json", "fold_02.json", "fold_03.json", "summary.json"]
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()
        summary = json.loads((first / "summary.json").read_text(encoding="utf-8"))
        assert summary["rows"] == 432
        assert len(summary["fold_results"]) == 3
        assert "mean accuracy" in capsys.readouterr().out

    def test_learn_and_explain(self, monk1_csv, tmp_path):
        out_dir = tmp_path / "run"
        code = run(["learn", "--data", str(monk1_csv), "--label", "class", "--folds", "2",
                    "--out-dir", str(out_dir), "--explain", "--sample", "5", "--kinds", "reasons"])
        assert code == EXIT_OK
        lines = (out_dir / "fold_01.reports.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 5
        stats = json.loads((out_dir / "fold_02.stats.json").read_text(encoding="utf-8"))
        assert stats["errors"] == 0

    def test_too_few_rows(self, tmp_path):
        data = tmp_path / "tiny.csv"
        data.write_text("a,label\n1,0\n2,1\n3,0\n", encoding="utf-8")
        code = run(["learn", "--data", str(data), "--label", "label", "--folds", "2",
                    "--out-dir", str(tmp_path / "out")])
        assert code == EXIT_USAGE

    def test_explain_rows_with_learned_tree(self, monk1_csv, tmp_path, capsys):
        out_dir = tmp_path / "run"
        run(["learn", "--data", str(monk1_csv), "--label", "class", "--folds", "2", "--out-dir", str(out_dir)])
        capsys.readouterr()
        stats = tmp_path / "stats.json"
        code = run(["explain", "--tree", str(out_dir / "fold_01.json"), "--data", str(monk1_csv),
                    "--label", "class", "--sample", "7", "--stats", str(stats)])
        assert code == EXIT_OK
        assert len(report_lines(capsys)) == 7
        assert 0.0 <= json.loads(stats.read_text(encoding="utf-8"))["accuracy"] <= 1.0


class TestVerifyCommand:
    def test_verify_passes(self, tmp_path, capsys):
        result = tmp_path / "verify.json"
        code = run(["verify", "--trials", "20", "--max-vars", "7", "--seed", "1",
                    "--checks", "oracle-agreement,minimal,duality,contrastive", "--json", str(result)])
        assert "oracle-agreement" in capsys.readouterr().out
        data = json.loads(result.read_text(encoding="utf-8"))
        assert code == EXIT_OK
        assert data["ok"] is True
        assert [row["check"] for row in data["checks"]] == ["oracle-agreement", "minimal", "duality", "contrastive"]
        assert all(row["failed"] == 0 for row in data["checks"])

    def test_injected_fault_fails(self):
        code = run(["verify", "--trials", "40", "--max-vars", "8", "--seed", "3",
                    "--checks", "oracle-agreement", "--inject-fault"])
        assert code == EXIT_FAILED

    def test_oracle_limit(self):
        assert run(["verify", "--trials", "1", "--max-vars", "40"]) == EXIT_USAGE

    def test_unknown_check(self):
        assert run(["verify", "--trials", "1", "--checks", "everything"]) == EXIT_USAGE


@pytest.mark.parametrize("command", ["learn", "explain", "verify"])
def test_help(command, capsys):
    assert run([command, "--help"]) == EXIT_OK
    assert "usage" in capsys.readouterr().out
