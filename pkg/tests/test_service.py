import importlib.util
import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from persua.corpus import corpus_stats
from persua.service import SNAPSHOT_HEADER, create_app, load_models, run_diagnostics
from persua.corpus import segment_sentences

from conftest import load_golden


@pytest.fixture()
def client(engine, tmp_path):
    app = create_app(engine, str(tmp_path / "submissions.jsonl"))
    with TestClient(app) as c:
        yield c


class TestFixtureIntegrity:
    def test_corpus_matches_manifest(self, mini_corpus, manifest):
        stats = corpus_stats(mini_corpus).to_json_dict()
        assert stats == manifest["stats"]

    def test_fixtures_regenerate_identically(self, fixture_paths, tmp_path):
        spec = importlib.util.spec_from_file_location(
            "build_fixtures", Path(__file__).parent / "fixtures" / "build_fixtures.py"
        )
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        module.build_all(tmp_path)
        committed_root = fixture_paths["corpus"].parent
        for rebuilt in sorted(tmp_path.rglob("*")):
            if rebuilt.is_dir():
                continue
            committed = committed_root / rebuilt.relative_to(tmp_path)
            assert committed.read_bytes() == rebuilt.read_bytes(), f"{committed} drifted from generator"


class TestTopics:
    def test_golden(self, client, fixture_paths):
        response = client.get("/topics")
        assert response.status_code == 200
        assert response.json() == load_golden(fixture_paths, "topics")

    def test_counts_partition_corpus(self, client, mini_corpus):
        payload = client.get("/topics").json()
        assert sum(entry["example_count"] for entry in payload) == len(mini_corpus.posts)

    def test_snapshot_header_present(self, client, fixture_bundle):
        response = client.get("/topics")
        assert response.headers[SNAPSHOT_HEADER] == fixture_bundle.snapshot_hash


class TestExamples:
    def test_golden(self, client, fixture_paths):
        response = client.get("/topics/parenthood/examples")
        assert response.status_code == 200
        assert response.json() == load_golden(fixture_paths, "examples_parenthood")

    def test_ordered_by_delta_descending(self, client):
        payload = client.get("/topics/parenthood/examples").json()
        deltas = [e["delta"] for e in payload["examples"]]
        assert deltas == sorted(deltas, reverse=True)

    def test_average_matches_member_ratios(self, client):
        payload = client.get("/topics/marriage/examples").json()
        categories = payload["average_ratios"].keys()
        for cat in categories:
            mean = sum(e["ratios"][cat] for e in payload["examples"]) / len(payload["examples"])
            assert payload["average_ratios"][cat] == pytest.approx(mean, abs=1e-9)

    def test_single_example_topic_would_project_to_origin(self, engine):
        data = engine.topic_examples("parenthood")
        # Full-topic MDS sanity: centroid of coordinates is the origin.
        xs = [e["mds"]["x"] for e in data["examples"]]
        ys = [e["mds"]["y"] for e in data["examples"]]
        assert abs(sum(xs)) < 1e-9 and abs(sum(ys)) < 1e-9

    def test_unknown_topic_payload(self, client):
        response = client.get("/topics/nonexistent/examples")
        assert response.status_code == 404
        body = response.json()
        assert body["error"] == "unknown_topic"


class TestAnalyze:
    def test_golden_draft(self, client, fixture_paths):
        draft = fixture_paths["draft"].read_text().strip()
        response = client.post("/analyze", json={"topic": "parenthood", "body": draft})
        assert response.status_code == 200
        assert response.json() == load_golden(fixture_paths, "analyze_draft")

    def test_deterministic(self, client, fixture_paths):
        draft = fixture_paths["draft"].read_text().strip()
        first = client.post("/analyze", json={"topic": "parenthood", "body": draft})
        second = client.post("/analyze", json={"topic": "parenthood", "body": draft})
        assert first.content == second.content

    def test_single_sentence_default_claim(self, client):
        response = client.post("/analyze", json={"topic": "parenthood", "body": "Parenthood is a burden."})
        payload = response.json()
        assert payload["portfolio"]["weights"]["claim"] == 1.0
        assert payload["portfolio"]["total_sentences"] == 1
        assert [s["component"] for s in payload["sentences"]] == ["claim"]

    def test_ratios_sum_to_one(self, client, fixture_paths):
        revised = fixture_paths["revised"].read_text().strip()
        payload = client.post("/analyze", json={"topic": "parenthood", "body": revised}).json()
        assert sum(payload["ratios"].values()) == pytest.approx(1.0, abs=1e-9)
        premise_nodes = [n for n in payload["tree"]["nodes"] if n["component"] == "premise"]
        attached = {e["premise_index"] for e in payload["tree"]["edges"]}
        assert {n["index"] for n in premise_nodes} <= attached

    def test_empty_body_rejected(self, client):
        response = client.post("/analyze", json={"topic": "parenthood", "body": "   "})
        assert response.status_code == 400
        assert response.json()["error"] == "validation_error"

    def test_missing_field_rejected(self, client):
        response = client.post("/analyze", json={"topic": "parenthood"})
        assert response.status_code == 400
        assert response.json()["error"] == "validation_error"


class TestCompare:
    def test_golden(self, client, fixture_paths):
        golden = load_golden(fixture_paths, "compare_draft_topic_average")
        analysis = load_golden(fixture_paths, "analyze_draft")
        response = client.post(
            "/compare",
            json={"user_ratios": analysis["ratios"], "reference": "topic_average", "topic": "parenthood"},
        )
        assert response.status_code == 200
        assert response.json() == golden

    def test_self_comparison_is_all_zero(self, client):
        examples = client.get("/topics/dating/examples").json()
        average = examples["average_ratios"]
        bars = client.post(
            "/compare", json={"user_ratios": average, "reference": "topic_average", "topic": "dating"}
        ).json()["bars"]
        assert all(abs(b["value"]) < 1e-9 for b in bars)

    def test_example_reference_matches_client_side(self, client):
        examples = client.get("/topics/marriage/examples").json()["examples"]
        target = examples[0]
        user = examples[-1]["ratios"]
        bars = client.post(
            "/compare", json={"user_ratios": user, "reference": target["post_id"], "topic": "marriage"}
        ).json()["bars"]
        for bar in bars:
            expected = (user[bar["category"]] - target["ratios"][bar["category"]]) * 100.0
            assert bar["value"] == pytest.approx(expected, abs=1e-9)
        values = [b["value"] for b in bars]
        assert values == sorted(values)

    def test_unknown_example_rejected(self, client):
        response = client.post(
            "/compare",
            json={"user_ratios": {"claim": 1.0, "logos": 0, "pathos": 0, "ethos": 0, "evidence": 0}, "reference": "ghost", "topic": "dating"},
        )
        assert response.status_code == 404
        assert response.json()["error"] == "unknown_example"


class TestSubmissions:
    def test_replay_in_order(self, client):
        first = client.post(
            "/submissions",
            json={"session_id": "s1", "topic": "dating", "body": "a.", "ratios": {"claim": 1.0}},
        )
        second = client.post(
            "/submissions",
            json={"session_id": "s1", "topic": "dating", "body": "b.", "ratios": {"claim": 1.0}},
        )
        assert first.json()["submission_id"] != second.json()["submission_id"]
        replay = client.get("/submissions", params={"session_id": "s1"}).json()["submissions"]
        assert [r["body"] for r in replay] == ["a.", "b."]
        assert replay[0]["timestamp_ms"] < replay[1]["timestamp_ms"]

    def test_sessions_are_isolated(self, client):
        client.post("/submissions", json={"session_id": "sa", "topic": "t", "body": "x.", "ratios": {}})
        replay = client.get("/submissions", params={"session_id": "other"}).json()["submissions"]
        assert replay == []

    def test_log_survives_restart(self, engine, tmp_path):
        log_path = tmp_path / "log.jsonl"
        with TestClient(create_app(engine, str(log_path))) as c:
            c.post("/submissions", json={"session_id": "s", "topic": "t", "body": "one.", "ratios": {}})
            c.post("/submissions", json={"session_id": "s", "topic": "t", "body": "two.", "ratios": {}})
        with TestClient(create_app(engine, str(log_path))) as c:
            c.post("/submissions", json={"session_id": "s", "topic": "t", "body": "three.", "ratios": {}})
            replay = c.get("/submissions", params={"session_id": "s"}).json()["submissions"]
        assert [r["body"] for r in replay] == ["one.", "two.", "three."]
        ids = [r["submission_id"] for r in replay]
        assert ids == sorted(ids)

    def test_append_only_byte_prefix(self, engine, tmp_path):
        log_path = tmp_path / "log.jsonl"
        with TestClient(create_app(engine, str(log_path))) as c:
            c.post("/submissions", json={"session_id": "s", "topic": "t", "body": "one.", "ratios": {}})
            before = log_path.read_bytes()
            c.post("/submissions", json={"session_id": "s", "topic": "t", "body": "two.", "ratios": {}})
            after = log_path.read_bytes()
        assert after.startswith(before)

    def test_malformed_submission_appends_nothing(self, engine, tmp_path):
        log_path = tmp_path / "log.jsonl"
        with TestClient(create_app(engine, str(log_path))) as c:
            response = c.post("/submissions", json={"session_id": "s", "body": "no topic"})
            assert response.status_code == 400
        assert not log_path.exists() or log_path.read_bytes() == b""


class TestDiagnostics:
    def test_doubled_word_flagged(self):
        body = "This point is is repeated."
        out = run_diagnostics(body, segment_sentences(body))
        assert any(d["kind"] == "doubled_word" for d in out)
        flag = next(d for d in out if d["kind"] == "doubled_word")
        start, end = flag["span"]
        assert body.encode()[start:end].decode() == "is is"

    def test_missing_terminal_punctuation(self):
        body = "First sentence. Second runs off the end"
        out = run_diagnostics(body, segment_sentences(body))
        assert any(d["kind"] == "missing_terminal_punctuation" for d in out)

    def test_long_sentence_flagged(self):
        body = "word " * 61 + "end."
        out = run_diagnostics(body, segment_sentences(body))
        assert any(d["kind"] == "long_sentence" for d in out)

    def test_clean_text_has_no_diagnostics(self):
        body = "This is fine. Nothing repeats here."
        assert run_diagnostics(body, segment_sentences(body)) == []


def test_missing_artifacts_fail_at_startup(tmp_path):
    with pytest.raises(FileNotFoundError, match="model artifacts missing"):
        load_models(str(tmp_path))


class TestEngineEdgeCases:
    def test_empty_corpus_lists_no_topics(self, fixture_bundle, fixture_provider):
        from persua.corpus import Corpus
        from persua.service import AnalysisEngine

        engine = AnalysisEngine(Corpus(), fixture_bundle, fixture_provider)
        assert engine.topics() == []

    def test_single_example_topic_projects_to_origin(self, mini_corpus, fixture_bundle, fixture_provider):
        from persua.corpus import Corpus
        from persua.service import AnalysisEngine

        lone = Corpus(posts=(mini_corpus.posts[0],))
        engine = AnalysisEngine(lone, fixture_bundle, fixture_provider)
        examples = engine.topic_examples("parenthood")["examples"]
        assert len(examples) == 1
        assert examples[0]["mds"] == {"x": 0.0, "y": 0.0}

    def test_remote_provider_with_undiscovered_dimension_starts_up(self, mini_corpus, fixture_bundle):
        import httpx

        from persua.features import RemoteProvider
        from persua.service import AnalysisEngine

        provider = RemoteProvider(
            "http://encoder.test/embed",
            transport=httpx.MockTransport(lambda request: httpx.Response(200, json={"vectors": [[0.0]]})),
        )
        # Dimension is unknown until the first call; startup must not probe it.
        engine = AnalysisEngine(mini_corpus, fixture_bundle, provider)
        assert engine.topics()

    def test_bad_user_ratios_rejected(self, client):
        response = client.post(
            "/compare",
            json={
                "user_ratios": {"claim": 0.9, "logos": 0.9, "pathos": 0.0, "ethos": 0.0, "evidence": 0.0},
                "reference": "topic_average",
                "topic": "dating",
            },
        )
        assert response.status_code == 400
        assert response.json()["error"] == "validation_error"
