"""HTTP service for topics, examples, analysis, comparison, and submissions.

The service loads a read-only snapshot at startup (corpus, model artifacts,
embedding provider) and precomputes per-topic example data: delta ranking,
portfolios, MDS coordinates, and the topic-average ratio vector. All read
endpoints are pure over that snapshot; only the submission log mutates state,
serialized through a single fsync-ing writer. Every response carries an
``X-Model-Snapshot`` header identifying the loaded model artifacts.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .classifiers import TrainedModel, load_model
from .corpus import ComponentLabel, Corpus, SentenceAnnotation, StrategyLabel, STRATEGY_ORDER, Sentence, segment_sentences
from .features import EmbeddingProvider
from .mds import mds_project, place_point
from .pipeline import (
    build_argument_tree,
    classify_premises,
    detect_relations,
    extract_components_detailed,
)
from .portfolio import (
    CATEGORIES,
    DifferenceBar,
    Portfolio,
    RatioVector,
    average_portfolio,
    build_portfolio,
    portfolio_difference,
    rank_examples_by_delta,
    ratios,
)

SNAPSHOT_HEADER = "X-Model-Snapshot"
LONG_SENTENCE_WORDS = 60

COMPONENT_MODEL_FILE = "components.model.json"
RELATION_MODEL_FILE = "relations.model.json"


def strategy_model_file(strategy: StrategyLabel) -> str:
    return f"strategy_{strategy.value}.model.json"


class ApiError(Exception):
    """Error carried to clients as ``{"error": code, "detail": message}``."""

    def __init__(self, status: int, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.status = status
        self.code = code
        self.detail = detail


@dataclass(frozen=True)
class ModelBundle:
    component: TrainedModel
    relation: TrainedModel
    strategies: dict[StrategyLabel, TrainedModel]
    snapshot_hash: str


def load_models(models_dir: str) -> ModelBundle:
    """Load the five model artifacts; missing files fail here, at startup."""
    root = Path(models_dir)
    names = [COMPONENT_MODEL_FILE, RELATION_MODEL_FILE] + [strategy_model_file(s) for s in STRATEGY_ORDER]
    missing = [n for n in names if not (root / n).exists()]
    if missing:
        raise FileNotFoundError(f"model artifacts missing in {models_dir}: {missing}")
    digest = hashlib.sha256()
    for name in names:
        digest.update(name.encode("utf-8"))
        digest.update((root / name).read_bytes())
    return ModelBundle(
        component=load_model(str(root / COMPONENT_MODEL_FILE)),
        relation=load_model(str(root / RELATION_MODEL_FILE)),
        strategies={s: load_model(str(root / strategy_model_file(s))) for s in STRATEGY_ORDER},
        snapshot_hash=digest.hexdigest(),
    )


def run_diagnostics(body: str, sentences: list[Sentence]) -> list[dict[str, Any]]:
    """Minimal writing checks: doubled words, long sentences, missing end mark."""
    out: list[dict[str, Any]] = []
    for sentence in sentences:
        words = sentence.text.split()
        if len(words) > LONG_SENTENCE_WORDS:
            out.append(
                {
                    "span": [sentence.start, sentence.end],
                    "kind": "long_sentence",
                    "message": f"sentence has {len(words)} words; consider splitting it",
                }
            )
        base = sentence.start
        raw = sentence.text.encode("utf-8")
        prev = None
        prev_start = 0
        cursor = 0
        for token in sentence.text.split():
            token_bytes = token.encode("utf-8")
            start = raw.index(token_bytes, cursor)
            cursor = start + len(token_bytes)
            norm = token.strip(".,;:!?").lower()
            if prev is not None and norm and norm == prev:
                out.append(
                    {
                        "span": [base + prev_start, base + cursor],
                        "kind": "doubled_word",
                        "message": f"repeated word {norm!r}",
                    }
                )
            prev = norm
            prev_start = start
    if sentences:
        last = sentences[-1]
        if last.text.rstrip()[-1] not in ".!?":
            out.append(
                {
                    "span": [last.start, last.end],
                    "kind": "missing_terminal_punctuation",
                    "message": "final sentence has no terminal punctuation",
                }
            )
    return out


def _ratio_dict(r: RatioVector) -> dict[str, float]:
    return r.by_category()


def _bars_json(bars: list[DifferenceBar]) -> list[dict[str, Any]]:
    return [{"category": b.category, "value": b.value, "deficient": b.deficient} for b in bars]


@dataclass(frozen=True)
class TopicData:
    ordered_posts: tuple[str, ...]
    portfolios: dict[str, Portfolio]
    ratio_vectors: dict[str, RatioVector]
    coords: dict[str, tuple[float, float]]
    average: RatioVector


class AnalysisEngine:
    """Loaded snapshot plus the full analyze/compare pipeline, HTTP-agnostic."""

    def __init__(self, corpus: Corpus, bundle: ModelBundle, provider: EmbeddingProvider):
        try:
            expected: int | None = provider.dimension
        except Exception:
            expected = None  # remote provider before its first call; checked per-predict instead
        if expected is not None and bundle.component.feature_dim != expected:
            raise ValueError(
                f"component model expects dimension {bundle.component.feature_dim}, provider yields {expected}"
            )
        if expected is not None and bundle.relation.feature_dim != 3 * expected:
            raise ValueError(
                f"relation model expects dimension {bundle.relation.feature_dim}, provider yields {3 * expected}"
            )
        self.corpus = corpus
        self.bundle = bundle
        self.provider = provider
        self._topics: dict[str, TopicData] = {}
        for topic in corpus.topics:
            posts = corpus.by_topic(topic)
            portfolios = {p.post_id: build_portfolio(p.annotations) for p in posts}
            vectors = {pid: ratios(pf) for pid, pf in portfolios.items()}
            order = rank_examples_by_delta(list(posts))
            points = mds_project([vectors[pid].values for pid in order])
            self._topics[topic] = TopicData(
                ordered_posts=tuple(order),
                portfolios=portfolios,
                ratio_vectors=vectors,
                coords={pid: pt for pid, pt in zip(order, points)},
                average=average_portfolio([portfolios[pid] for pid in order]),
            )

    # -- read API ---------------------------------------------------------

    def topics(self) -> list[dict[str, Any]]:
        return [{"topic": t, "example_count": len(self._topics[t].ordered_posts)} for t in self.corpus.topics]

    def _topic_data(self, topic: str) -> TopicData:
        if topic not in self._topics:
            raise ApiError(404, "unknown_topic", f"topic {topic!r} is not in the corpus")
        return self._topics[topic]

    def topic_examples(self, topic: str) -> dict[str, Any]:
        data = self._topic_data(topic)
        posts = {p.post_id: p for p in self.corpus.by_topic(topic)}
        examples = []
        for pid in data.ordered_posts:
            post = posts[pid]
            x, y = data.coords[pid]
            examples.append(
                {
                    "post_id": pid,
                    "delta": post.delta,
                    "body": post.body,
                    "sentences": [
                        {
                            "index": s.index,
                            "start": s.start,
                            "end": s.end,
                            "text": s.text,
                            "component": post.annotations[s.index].component.value,
                            "strategies": [
                                lab.value for lab in STRATEGY_ORDER if lab in post.annotations[s.index].strategies
                            ],
                        }
                        for s in post.sentences
                    ],
                    "portfolio": data.portfolios[pid].to_json_dict(),
                    "ratios": _ratio_dict(data.ratio_vectors[pid]),
                    "mds": {"x": x, "y": y},
                }
            )
        return {"topic": topic, "average_ratios": _ratio_dict(data.average), "examples": examples}

    # -- analysis ---------------------------------------------------------

    def analyze(self, topic: str, body: str) -> dict[str, Any]:
        data = self._topic_data(topic)
        sentences = segment_sentences(body)
        if not sentences:
            raise ApiError(400, "validation_error", "body contains no sentences")
        components, used_default_claim = extract_components_detailed(sentences, self.bundle.component, self.provider)
        label_of = dict(components)
        claims = [s for s in sentences if label_of[s.index] is ComponentLabel.CLAIM]
        premises = [s for s in sentences if label_of[s.index] is ComponentLabel.PREMISE]
        edges = detect_relations(claims, premises, self.bundle.relation, self.provider) if premises else []
        strategy_sets = classify_premises(premises, self.bundle.strategies, self.provider)
        strategies = {p.index: s for p, s in zip(premises, strategy_sets)}
        tree = build_argument_tree(components, strategies, edges)
        annotations = [
            SentenceAnnotation(
                sentence_index=s.index,
                component=label_of[s.index],
                strategies=strategies.get(s.index, frozenset()),
            )
            for s in sentences
        ]
        pf = build_portfolio(annotations)
        rv = ratios(pf)
        user_point = None
        if data.ordered_posts:
            example_vectors = np.array([data.ratio_vectors[pid].values for pid in data.ordered_posts])
            distances = np.linalg.norm(example_vectors - np.array(rv.values), axis=1)
            coords = [data.coords[pid] for pid in data.ordered_posts]
            x, y = place_point(list(distances), coords)
            user_point = {"x": x, "y": y}
        return {
            "topic": topic,
            "sentences": [
                {
                    "index": s.index,
                    "start": s.start,
                    "end": s.end,
                    "text": s.text,
                    "component": label_of[s.index].value,
                    "strategies": [
                        lab.value for lab in STRATEGY_ORDER if lab in strategies.get(s.index, frozenset())
                    ],
                }
                for s in sentences
            ],
            "tree": {
                "nodes": [
                    {
                        "index": n.index,
                        "component": n.component.value,
                        "strategies": [lab.value for lab in STRATEGY_ORDER if lab in n.strategies],
                    }
                    for n in tree.nodes
                ],
                "edges": [
                    {"premise_index": e.premise_index, "claim_index": e.claim_index, "fallback": e.fallback}
                    for e in tree.edges
                ],
            },
            "portfolio": pf.to_json_dict(),
            "ratios": _ratio_dict(rv),
            "mds": user_point,
            "diagnostics": run_diagnostics(body, sentences),
            "used_default_claim": used_default_claim,
            "fallback_edges": sum(1 for e in tree.edges if e.fallback),
        }

    def compare(self, user_ratios: dict[str, float], reference: str, topic: str) -> dict[str, Any]:
        data = self._topic_data(topic)
        try:
            user = RatioVector.from_mapping(user_ratios)
        except ValueError as exc:
            raise ApiError(400, "validation_error", str(exc)) from exc
        if reference == "topic_average":
            ref = data.average
        elif reference in data.ratio_vectors:
            ref = data.ratio_vectors[reference]
        else:
            raise ApiError(404, "unknown_example", f"example {reference!r} is not in topic {topic!r}")
        return {
            "topic": topic,
            "reference": reference,
            "bars": _bars_json(portfolio_difference(user, ref)),
        }


# ---------------------------------------------------------------------------
# Submission log
# ---------------------------------------------------------------------------


class SubmissionLog:
    """Append-only JSONL log with fsync-on-write and ordered replay.

    Timestamps are UTC milliseconds, forced strictly increasing per session so
    replay order is well-defined even for rapid submissions.
    """

    def __init__(self, path: str):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._count = 0
        self._last_ts: dict[str, int] = {}
        if self.path.exists():
            for record in self._iter_records():
                self._count += 1
                self._last_ts[record["session_id"]] = record["timestamp_ms"]

    def _iter_records(self) -> Iterator[dict[str, Any]]:
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield json.loads(line)

    def append(self, session_id: str, topic: str, body: str, ratios_payload: dict[str, float]) -> dict[str, Any]:
        with self._lock:
            now = int(time.time() * 1000)
            ts = max(now, self._last_ts.get(session_id, -1) + 1)
            self._count += 1
            record = {
                "submission_id": f"sub-{self._count:06d}",
                "session_id": session_id,
                "topic": topic,
                "body": body,
                "ratios": ratios_payload,
                "timestamp_ms": ts,
            }
            line = json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
            self._last_ts[session_id] = ts
            return record

    def replay(self, session_id: str) -> list[dict[str, Any]]:
        with self._lock:
            if not self.path.exists():
                return []
            return [r for r in self._iter_records() if r["session_id"] == session_id]


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------


class AnalyzeRequest(BaseModel):
    topic: str
    body: str


class CompareRequest(BaseModel):
    user_ratios: dict[str, float]
    reference: str
    topic: str


class SubmissionRequest(BaseModel):
    session_id: str
    topic: str
    body: str
    ratios: dict[str, float]


def create_app(engine: AnalysisEngine, log_path: str, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="persua", docs_url=None, redoc_url=None)
    log = SubmissionLog(log_path)

    @app.middleware("http")
    async def snapshot_header(request: Request, call_next):
        response = await call_next(request)
        response.headers[SNAPSHOT_HEADER] = engine.bundle.snapshot_hash
        return response

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.code, "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "validation_error", "detail": str(exc.errors())})

    @app.get("/topics")
    def get_topics():
        return engine.topics()

    @app.get("/topics/{topic}/examples")
    def get_examples(topic: str):
        return engine.topic_examples(topic)

    @app.post("/analyze")
    def post_analyze(request: AnalyzeRequest):
        if not request.body.strip():
            raise ApiError(400, "validation_error", "body must be non-empty")
        return engine.analyze(request.topic, request.body)

    @app.post("/compare")
    def post_compare(request: CompareRequest):
        return engine.compare(request.user_ratios, request.reference, request.topic)

    @app.post("/submissions")
    def post_submission(request: SubmissionRequest):
        if not request.session_id.strip():
            raise ApiError(400, "validation_error", "session_id must be non-empty")
        record = log.append(request.session_id, request.topic, request.body, request.ratios)
        return {"submission_id": record["submission_id"]}

    @app.get("/submissions")
    def get_submissions(session_id: str):
        return {"submissions": log.replay(session_id)}

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
