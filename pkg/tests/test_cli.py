import json
from pathlib import Path

import pytest

from persua.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def corpus_path(fixture_paths):
    return str(fixture_paths["corpus"])


class TestValidateCommand:
    def test_clean_fixture_exits_zero(self, capsys, corpus_path):
        code, out, _ = run_cli(capsys, "validate", "--corpus", corpus_path)
        assert code == 0
        payload = json.loads(out)
        assert payload["violation_count"] == 0
        assert payload["violations"] == []

    def test_dirty_corpus_exits_one(self, capsys, tmp_path, corpus_path):
        # An edge whose claim endpoint is a premise passes the parse-time
        # schema but violates the coding rules.
        line = json.loads(Path(corpus_path).read_text().splitlines()[2])
        line["edges"] = [{"premise_index": 1, "claim_index": 2, "label": 1}]
        bad = tmp_path / "bad.jsonl"
        bad.write_text(json.dumps(line) + "\n")
        code, out, _ = run_cli(capsys, "validate", "--corpus", str(bad))
        assert code == 1
        assert json.loads(out)["violation_count"] >= 1

    def test_missing_file_exits_one(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--corpus", "/nonexistent.jsonl")
        assert code == 1

    def test_unknown_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["validate", "--nope"])
        assert exc.value.code == 2


class TestStatsCommand:
    def test_stats_match_manifest(self, capsys, corpus_path, manifest):
        code, out, _ = run_cli(capsys, "stats", "--corpus", corpus_path)
        assert code == 0
        assert json.loads(out) == manifest["stats"]


class TestIngestCommand:
    def test_ingest_clean(self, capsys, corpus_path):
        code, out, _ = run_cli(capsys, "ingest", "--corpus", corpus_path)
        assert code == 0
        payload = json.loads(out)
        assert payload["validation"]["violation_count"] == 0
        assert payload["stats"]["post_count"] == 11


class TestTrainCommand:
    def test_train_components_deterministic(self, capsys, corpus_path, tmp_path):
        args = [
            "train",
            "--corpus",
            corpus_path,
            "--task",
            "components",
            "--seed",
            "7",
            "--dim",
            "128",
            "--specs",
            "gaussian_nb,knn",
            "--out",
        ]
        code1, out1, _ = run_cli(capsys, *args, str(tmp_path / "run1"))
        code2, out2, _ = run_cli(capsys, *args, str(tmp_path / "run2"))
        assert code1 == code2 == 0
        report1 = (tmp_path / "run1" / "cv_components.json").read_bytes()
        report2 = (tmp_path / "run2" / "cv_components.json").read_bytes()
        assert report1 == report2
        model1 = (tmp_path / "run1" / "components.model.json").read_bytes()
        model2 = (tmp_path / "run2" / "components.model.json").read_bytes()
        assert model1 == model2
        payload = json.loads(out1)
        assert payload["seed"] == 7
        assert payload["tasks"]["components"]["winner"]["seed"] == 7

    def test_train_all_tasks_writes_all_artifacts(self, capsys, corpus_path, tmp_path):
        out_dir = tmp_path / "artifacts"
        code, out, _ = run_cli(
            capsys,
            "train",
            "--corpus",
            corpus_path,
            "--task",
            "all",
            "--seed",
            "3",
            "--dim",
            "64",
            "--specs",
            "gaussian_nb,knn",
            "--out",
            str(out_dir),
        )
        assert code == 0
        names = {p.name for p in out_dir.iterdir()}
        assert {
            "components.model.json",
            "relations.model.json",
            "strategy_logos.model.json",
            "strategy_pathos.model.json",
            "strategy_ethos.model.json",
            "strategy_evidence.model.json",
            "provider.json",
            "cv_components.json",
            "cv_relations.json",
            "cv_premises.json",
        } <= names


class TestEvaluateCommand:
    def test_evaluate_prints_metrics_with_reference(self, capsys, corpus_path):
        code, out, _ = run_cli(
            capsys,
            "evaluate",
            "--corpus",
            corpus_path,
            "--task",
            "components",
            "--family",
            "knn",
            "--dim",
            "64",
            "--seed",
            "5",
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload["metrics"]["per_class"]) == {"claim", "premise", "non_argument"}
        assert payload["reference"]["family"] == "logistic_regression"
        assert payload["reference"]["claim_with_default_claim_rule"] == {
            "precision": 0.79,
            "recall": 0.49,
            "f1": 0.61,
        }


class TestAnalyzeCommand:
    def test_analyze_ratios_sum_to_one(self, capsys, fixture_paths, tmp_path):
        essay = tmp_path / "essay.txt"
        essay.write_text(fixture_paths["draft"].read_text())
        code, out, _ = run_cli(
            capsys,
            "analyze",
            "--corpus",
            str(fixture_paths["corpus"]),
            "--models",
            str(fixture_paths["models"]),
            "--in",
            str(essay),
            "--topic",
            "parenthood",
        )
        assert code == 0
        payload = json.loads(out)
        assert sum(payload["ratios"].values()) == pytest.approx(1.0, abs=1e-9)
        assert payload["sentences"][0]["component"] == "claim"
