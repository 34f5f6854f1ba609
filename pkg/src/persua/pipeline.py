"""End-to-end argumentation tasks and the model-selection protocol.

Three tasks are driven from here: sentence component extraction (claim /
premise / non-argument), support relation detection over claim-premise pairs
with balanced negative sampling, and one-vs-all multi-label premise
classification into the four persuasive strategies. Model selection runs
stratified k-fold cross-validation over candidate specs and picks the
highest mean support-weighted F1.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

import numpy as np

from .classifiers import ClassMetrics, ClassScore, ModelSpec, TrainedModel, evaluate_metrics, predict_batch, train_model
from .corpus import ComponentLabel, Corpus, Sentence, StrategyLabel, STRATEGY_ORDER
from .features import EmbeddingProvider, pair_features


class TaskKind(str, Enum):
    COMPONENT_EXTRACTION = "components"
    RELATION_DETECTION = "relations"
    PREMISE_CLASSIFICATION = "premises"


#: Candidate families tried during model selection, in tie-break order.
DEFAULT_FAMILIES: tuple[str, ...] = (
    "logistic_regression",
    "linear_svm",
    "random_forest",
    "gaussian_nb",
    "knn",
)

#: Published reference performance for the three tasks, measured with a
#: contextual-encoder feature extractor on the original annotated corpus.
#: Not reproducible here (private labels, external encoder); reported next to
#: locally computed metrics for context only, never asserted.
REFERENCE_RESULTS: dict[str, Any] = {
    "components": {
        "family": "logistic_regression",
        "per_class": {
            "claim": {"precision": 0.73, "recall": 0.31, "f1": 0.43},
            "premise": {"precision": 0.79, "recall": 0.97, "f1": 0.87},
            "non_argument": {"precision": 0.91, "recall": 0.53, "f1": 0.67},
        },
        "claim_with_default_claim_rule": {"precision": 0.79, "recall": 0.49, "f1": 0.61},
    },
    "relations": {
        "family": "random_forest",
        "per_class": {
            "support": {"precision": 0.93, "recall": 0.80, "f1": 0.86},
            "non_support": {"precision": 0.98, "recall": 0.95, "f1": 0.96},
        },
        "pair_counts": {"positive": 250, "negative": 250},
    },
    "premises": {
        "family": "linear_svm",
        "per_class": {
            "logos": {"precision": 0.79, "recall": 0.87, "f1": 0.83},
            "pathos": {"precision": 0.83, "recall": 0.29, "f1": 0.43},
            "evidence": {"precision": 0.75, "recall": 0.66, "f1": 0.70},
            "ethos": {"precision": 1.00, "recall": 0.65, "f1": 0.79},
        },
    },
}


def default_specs(seed: int = 42) -> list[ModelSpec]:
    return [ModelSpec(family=f, seed=seed) for f in DEFAULT_FAMILIES]  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Component extraction
# ---------------------------------------------------------------------------


def extract_components_detailed(
    sentences: Sequence[Sentence],
    model: TrainedModel,
    provider: EmbeddingProvider,
) -> tuple[list[tuple[int, ComponentLabel]], bool]:
    """Label every sentence, then apply the default-claim rule.

    If the classifier marks no sentence as a claim, sentence 0 is relabeled
    as the claim so the interactive flow always has an anchor. Returns the
    labels and whether the rule fired.
    """
    if not sentences:
        raise ValueError("extract_components: empty sentence list")
    vectors = provider.embed_batch([s.text for s in sentences])
    predicted, _ = predict_batch(model, vectors)
    labels = [ComponentLabel(p) for p in predicted]
    rule_applied = ComponentLabel.CLAIM not in labels
    if rule_applied:
        labels[0] = ComponentLabel.CLAIM
    return [(s.index, label) for s, label in zip(sentences, labels)], rule_applied


def extract_components(
    sentences: Sequence[Sentence],
    model: TrainedModel,
    provider: EmbeddingProvider,
) -> list[tuple[int, ComponentLabel]]:
    labeled, _ = extract_components_detailed(sentences, model, provider)
    return labeled


# ---------------------------------------------------------------------------
# Relation pairs and detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationPair:
    post_id: str
    claim_index: int
    premise_index: int
    label: int  # 1 support, 0 non-support


@dataclass(frozen=True)
class PairGeneration:
    pairs: tuple[RelationPair, ...]
    shortfall: int

    @property
    def positives(self) -> int:
        return sum(1 for p in self.pairs if p.label == 1)

    @property
    def negatives(self) -> int:
        return sum(1 for p in self.pairs if p.label == 0)


def generate_relation_pairs(corpus: Corpus, seed: int) -> PairGeneration:
    """All labeled support edges plus per-claim balanced negative samples.

    For each claim, as many same-post non-supporting premises are drawn
    (seeded, without replacement) as the claim has positives; if the post
    lacks candidates the shortfall is reported instead of padded.
    """
    pairs: list[RelationPair] = []
    shortfall = 0
    for post_ordinal, post in enumerate(corpus.posts):
        premise_indices = [a.sentence_index for a in post.annotations if a.component is ComponentLabel.PREMISE]
        supporters: dict[int, set[int]] = {}
        for edge in post.edges:
            if edge.label == 1:
                supporters.setdefault(edge.claim_index, set()).add(edge.premise_index)
                pairs.append(
                    RelationPair(
                        post_id=post.post_id,
                        claim_index=edge.claim_index,
                        premise_index=edge.premise_index,
                        label=1,
                    )
                )
        for claim_index in sorted(supporters):
            positives = supporters[claim_index]
            candidates = [p for p in premise_indices if p not in positives]
            want = len(positives)
            take = min(want, len(candidates))
            shortfall += want - take
            rng = np.random.default_rng([seed, post_ordinal, claim_index])
            chosen = sorted(rng.choice(len(candidates), size=take, replace=False)) if take else []
            for pos in chosen:
                pairs.append(
                    RelationPair(
                        post_id=post.post_id,
                        claim_index=claim_index,
                        premise_index=candidates[pos],
                        label=0,
                    )
                )
    return PairGeneration(pairs=tuple(pairs), shortfall=shortfall)


@dataclass(frozen=True)
class DetectedEdge:
    premise_index: int
    claim_index: int
    fallback: bool = False


def detect_relations(
    claims: Sequence[Sentence],
    premises: Sequence[Sentence],
    model: TrainedModel,
    provider: EmbeddingProvider,
) -> list[DetectedEdge]:
    """Classify every (premise, claim) pair; keep every premise attached.

    A premise the model connects to nothing is attached to the nearest
    preceding claim (the first claim when none precedes) with the edge
    flagged as a fallback, so the structure view never shows dangling
    premises.
    """
    if not claims:
        raise ValueError("detect_relations: no claims (default-claim rule should have produced one)")
    if not premises:
        return []
    claim_vecs = provider.embed_batch([c.text for c in claims])
    premise_vecs = provider.embed_batch([p.text for p in premises])
    rows = []
    for pv in premise_vecs:
        for cv in claim_vecs:
            rows.append(pair_features(cv, pv))
    predicted, _ = predict_batch(model, np.stack(rows))
    edges: list[DetectedEdge] = []
    for i, premise in enumerate(premises):
        attached = False
        for j, claim in enumerate(claims):
            if predicted[i * len(claims) + j] == 1:
                edges.append(DetectedEdge(premise_index=premise.index, claim_index=claim.index))
                attached = True
        if not attached:
            preceding = [c for c in claims if c.index < premise.index]
            anchor = preceding[-1] if preceding else claims[0]
            edges.append(DetectedEdge(premise_index=premise.index, claim_index=anchor.index, fallback=True))
    return edges


# ---------------------------------------------------------------------------
# Premise classification (one-vs-all)
# ---------------------------------------------------------------------------

POSITIVE_THRESHOLD = 0.5


def _positive_score(model: TrainedModel, scores: np.ndarray) -> float:
    if 1 in model.classes:
        return float(scores[model.classes.index(1)])
    return 0.0


def classify_premises(
    premises: Sequence[Sentence],
    models: Mapping[StrategyLabel, TrainedModel],
    provider: EmbeddingProvider,
) -> list[frozenset[StrategyLabel]]:
    """One-vs-all strategy sets; never empty.

    A strategy is included when its binary model's positive score reaches
    0.5. If nothing clears the threshold the single highest-scoring strategy
    is kept (ties resolve in taxonomy order), so every premise shows at
    least one strategy.
    """
    missing = [s.value for s in STRATEGY_ORDER if s not in models]
    if missing:
        raise ValueError(f"missing strategy models: {missing}")
    if not premises:
        return []
    vectors = provider.embed_batch([p.text for p in premises])
    score_matrix: dict[StrategyLabel, np.ndarray] = {}
    for strategy in STRATEGY_ORDER:
        model = models[strategy]
        _, scores = predict_batch(model, vectors)
        score_matrix[strategy] = np.array([_positive_score(model, row) for row in scores])
    result: list[frozenset[StrategyLabel]] = []
    for i in range(len(premises)):
        chosen = {s for s in STRATEGY_ORDER if score_matrix[s][i] >= POSITIVE_THRESHOLD}
        if not chosen:
            best = max(STRATEGY_ORDER, key=lambda s: score_matrix[s][i])
            chosen = {best}
        result.append(frozenset(chosen))
    return result


# ---------------------------------------------------------------------------
# Argument tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    index: int
    component: ComponentLabel
    strategies: frozenset[StrategyLabel] = frozenset()


@dataclass(frozen=True)
class ArgumentTree:
    nodes: tuple[TreeNode, ...]
    edges: tuple[DetectedEdge, ...]


def build_argument_tree(
    components: Sequence[tuple[int, ComponentLabel]],
    strategies: Mapping[int, frozenset[StrategyLabel]],
    edges: Sequence[DetectedEdge],
) -> ArgumentTree:
    """Assemble and check the per-sentence node/edge structure."""
    seen: set[int] = set()
    component_of: dict[int, ComponentLabel] = {}
    nodes: list[TreeNode] = []
    for index, component in components:
        if index in seen:
            raise ValueError(f"sentence {index} appears twice")
        seen.add(index)
        component_of[index] = component
        nodes.append(
            TreeNode(
                index=index,
                component=component,
                strategies=strategies.get(index, frozenset()) if component is ComponentLabel.PREMISE else frozenset(),
            )
        )
    if nodes and ComponentLabel.CLAIM not in component_of.values():
        raise ValueError("argument tree needs at least one claim node")
    for edge in edges:
        if component_of.get(edge.premise_index) is not ComponentLabel.PREMISE:
            raise ValueError(f"edge premise_index {edge.premise_index} is not a premise")
        if component_of.get(edge.claim_index) is not ComponentLabel.CLAIM:
            raise ValueError(f"edge claim_index {edge.claim_index} is not a claim")
    return ArgumentTree(nodes=tuple(nodes), edges=tuple(edges))


# ---------------------------------------------------------------------------
# Dataset assembly from a labeled corpus
# ---------------------------------------------------------------------------


def build_component_dataset(corpus: Corpus, provider: EmbeddingProvider) -> tuple[np.ndarray, list[str]]:
    texts: list[str] = []
    labels: list[str] = []
    for post in corpus.posts:
        for ann in post.annotations:
            texts.append(post.sentences[ann.sentence_index].text)
            labels.append(ann.component.value)
    if not texts:
        raise ValueError("corpus has no annotated sentences")
    return provider.embed_batch(texts), labels


def build_relation_dataset(
    corpus: Corpus, provider: EmbeddingProvider, seed: int
) -> tuple[np.ndarray, list[int], PairGeneration]:
    generation = generate_relation_pairs(corpus, seed)
    if not generation.pairs:
        raise ValueError("corpus has no support edges to learn relations from")
    by_post = {post.post_id: post for post in corpus.posts}
    vec_cache: dict[tuple[str, int], np.ndarray] = {}

    def vec(post_id: str, index: int) -> np.ndarray:
        key = (post_id, index)
        if key not in vec_cache:
            vec_cache[key] = provider.embed_batch([by_post[post_id].sentences[index].text])[0]
        return vec_cache[key]

    rows = [pair_features(vec(p.post_id, p.claim_index), vec(p.post_id, p.premise_index)) for p in generation.pairs]
    return np.stack(rows), [p.label for p in generation.pairs], generation


def build_premise_dataset(
    corpus: Corpus, provider: EmbeddingProvider
) -> tuple[np.ndarray, dict[StrategyLabel, list[int]]]:
    texts: list[str] = []
    strategy_sets: list[frozenset[StrategyLabel]] = []
    for post in corpus.posts:
        for ann in post.annotations:
            if ann.component is ComponentLabel.PREMISE:
                texts.append(post.sentences[ann.sentence_index].text)
                strategy_sets.append(ann.strategies)
    if not texts:
        raise ValueError("corpus has no premises")
    labels = {s: [1 if s in strategies else 0 for strategies in strategy_sets] for s in STRATEGY_ORDER}
    return provider.embed_batch(texts), labels


# ---------------------------------------------------------------------------
# Stratified cross-validation and model selection
# ---------------------------------------------------------------------------


def _content_keys(X: np.ndarray, y: Sequence[Any]) -> list[bytes]:
    return [
        hashlib.blake2b(row.tobytes() + str(label).encode("utf-8"), digest_size=16).digest()
        for row, label in zip(np.asarray(X, dtype=np.float64), y)
    ]


def _stratified_folds(X: np.ndarray, y: Sequence[Any], k: int, seed: int) -> tuple[list[np.ndarray], list[bytes]]:
    if k < 2:
        raise ValueError("cross-validation needs k >= 2")
    keys = _content_keys(X, y)
    classes = sorted(set(y), key=str)
    fold_members: list[list[int]] = [[] for _ in range(k)]
    for ci, cls in enumerate(classes):
        members = [i for i, label in enumerate(y) if label == cls]
        if len(members) < k:
            raise ValueError(f"class {cls!r} has {len(members)} members, fewer than k={k}")
        members.sort(key=lambda i: keys[i])
        rng = random.Random(f"{seed}:{ci}")
        rng.shuffle(members)
        for pos, i in enumerate(members):
            fold_members[pos % k].append(i)
    folds = [np.asarray(sorted(members, key=lambda i: keys[i]), dtype=np.int64) for members in fold_members]
    return folds, keys


def stratified_fold_indices(X: np.ndarray, y: Sequence[Any], k: int, seed: int) -> list[np.ndarray]:
    """k stratified folds keyed by sample content, not input position.

    Within each class, members are ordered by a content digest, shuffled with
    a per-class seeded RNG, and dealt round-robin, so per-class fold sizes
    differ by at most one and permuting the input permutes the folds
    identically. Returns, per fold, the test indices in canonical (digest)
    order.
    """
    return _stratified_folds(X, y, k, seed)[0]


@dataclass(frozen=True)
class CvEntry:
    spec: ModelSpec
    per_class: dict[Any, ClassScore]
    weighted_f1: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_json_dict(),
            "per_class": {
                str(label): {
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                    "support": s.support,
                }
                for label, s in self.per_class.items()
            },
            "weighted_f1": self.weighted_f1,
        }


@dataclass(frozen=True)
class CvReport:
    task: TaskKind
    k: int
    seed: int
    entries: tuple[CvEntry, ...]
    winner_index: int

    @property
    def winner(self) -> ModelSpec:
        return self.entries[self.winner_index].spec

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "task": self.task.value,
            "folds": self.k,
            "seed": self.seed,
            "entries": [e.to_json_dict() for e in self.entries],
            "winner_index": self.winner_index,
            "winner": self.winner.to_json_dict(),
        }


def _mean_scores(fold_metrics: list[ClassMetrics], labels: Sequence[Any]) -> dict[Any, ClassScore]:
    out: dict[Any, ClassScore] = {}
    for label in labels:
        scores = [m.per_class[label] for m in fold_metrics]
        out[label] = ClassScore(
            precision=float(np.mean([s.precision for s in scores])),
            recall=float(np.mean([s.recall for s in scores])),
            f1=float(np.mean([s.f1 for s in scores])),
            support=sum(s.support for s in scores),
        )
    return out


def _train_indices(n: int, test_idx: np.ndarray, keys: list[bytes]) -> np.ndarray:
    # Canonical (digest) order keeps order-sensitive training permutation-invariant.
    test_set = set(test_idx.tolist())
    return np.asarray(sorted((i for i in range(n) if i not in test_set), key=lambda i: keys[i]), dtype=np.int64)


def _cv_single_label(
    spec: ModelSpec, X: np.ndarray, y: Sequence[Any], folds: list[np.ndarray], keys: list[bytes]
) -> CvEntry:
    labels = sorted(set(y), key=str)
    y_arr = np.asarray(y, dtype=object)
    fold_metrics: list[ClassMetrics] = []
    for test_idx in folds:
        train_idx = _train_indices(len(y), test_idx, keys)
        model = train_model(spec, X[train_idx], list(y_arr[train_idx]))
        predicted, _ = predict_batch(model, X[test_idx])
        fold_metrics.append(evaluate_metrics(list(y_arr[test_idx]), predicted, labels=labels))
    weighted = float(np.mean([m.weighted_f1 for m in fold_metrics]))
    return CvEntry(spec=spec, per_class=_mean_scores(fold_metrics, labels), weighted_f1=weighted)


def _cv_premises(spec: ModelSpec, X: np.ndarray, labels: Mapping[StrategyLabel, Sequence[int]], k: int, seed: int) -> CvEntry:
    per_class: dict[Any, ClassScore] = {}
    supports: dict[StrategyLabel, int] = {}
    for strategy in STRATEGY_ORDER:
        y = list(labels[strategy])
        folds, keys = _stratified_folds(X, y, k, seed)
        y_arr = np.asarray(y)
        fold_scores: list[ClassScore] = []
        for test_idx in folds:
            train_idx = _train_indices(len(y), test_idx, keys)
            model = train_model(spec, X[train_idx], list(y_arr[train_idx]))
            predicted, _ = predict_batch(model, X[test_idx])
            metrics = evaluate_metrics(list(y_arr[test_idx]), predicted, labels=[0, 1])
            fold_scores.append(metrics.per_class[1])
        per_class[strategy.value] = ClassScore(
            precision=float(np.mean([s.precision for s in fold_scores])),
            recall=float(np.mean([s.recall for s in fold_scores])),
            f1=float(np.mean([s.f1 for s in fold_scores])),
            support=sum(s.support for s in fold_scores),
        )
        supports[strategy] = per_class[strategy.value].support
    total = sum(supports.values())
    weighted = sum(supports[s] * per_class[s.value].f1 for s in STRATEGY_ORDER) / total if total else 0.0
    return CvEntry(spec=spec, per_class=per_class, weighted_f1=float(weighted))


def cross_validate(
    task: TaskKind,
    specs: Sequence[ModelSpec],
    X: np.ndarray,
    y: Sequence[Any] | Mapping[StrategyLabel, Sequence[int]],
    k: int = 5,
    seed: int = 42,
) -> CvReport:
    """Stratified k-fold evaluation of every spec; winner is the highest mean
    weighted F1, ties resolving to the earliest spec."""
    if not specs:
        raise ValueError("cross_validate needs at least one spec")
    X = np.asarray(X, dtype=np.float64)
    entries: list[CvEntry] = []
    if task is TaskKind.PREMISE_CLASSIFICATION:
        if not isinstance(y, Mapping):
            raise ValueError("premise classification expects per-strategy binary labels")
        for spec in specs:
            entries.append(_cv_premises(spec.normalized(), X, y, k, seed))
    else:
        if isinstance(y, Mapping):
            raise ValueError(f"task {task.value} expects a flat label list")
        folds, keys = _stratified_folds(X, y, k, seed)
        for spec in specs:
            entries.append(_cv_single_label(spec.normalized(), X, y, folds, keys))
    winner = max(range(len(entries)), key=lambda i: (entries[i].weighted_f1, -i))
    return CvReport(task=task, k=k, seed=seed, entries=tuple(entries), winner_index=winner)


def fit_final_and_test(
    task: TaskKind,
    winner_spec: ModelSpec,
    train: tuple[np.ndarray, Any],
    test: tuple[np.ndarray, Any],
) -> ClassMetrics:
    """Fit the selected spec on the full training split, report test metrics."""
    X_train, y_train = train
    X_test, y_test = test
    if task is TaskKind.PREMISE_CLASSIFICATION:
        per_class: dict[Any, ClassScore] = {}
        total = 0
        weighted = 0.0
        for strategy in STRATEGY_ORDER:
            model = train_model(winner_spec, X_train, list(y_train[strategy]))
            predicted, _ = predict_batch(model, X_test)
            metrics = evaluate_metrics(list(y_test[strategy]), predicted, labels=[0, 1])
            score = metrics.per_class[1]
            per_class[strategy.value] = score
            total += score.support
            weighted += score.support * score.f1
        return ClassMetrics(per_class=per_class, weighted_f1=weighted / total if total else 0.0)
    model = train_model(winner_spec, X_train, list(y_train))
    predicted, _ = predict_batch(model, X_test)
    return evaluate_metrics(list(y_test), predicted, labels=list(model.classes))
