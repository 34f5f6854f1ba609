import json

import numpy as np
import pytest

from persua.classifiers import ModelFamily, ModelSpec, TrainedModel, train_model
from persua.corpus import (
    AnnotatedPost,
    ComponentLabel,
    Corpus,
    SentenceAnnotation,
    StrategyLabel,
    SupportEdge,
    segment_sentences,
)
from persua.features import HashingProvider, pair_features
from persua.pipeline import (
    DetectedEdge,
    TaskKind,
    build_argument_tree,
    classify_premises,
    cross_validate,
    default_specs,
    detect_relations,
    extract_components,
    extract_components_detailed,
    fit_final_and_test,
    generate_relation_pairs,
    stratified_fold_indices,
)

PROVIDER = HashingProvider(dimension=128, seed=7)


def teach_knn(texts, labels):
    """kNN with k=1 memorizes the labeled texts exactly."""
    return train_model(ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1}), PROVIDER.embed_batch(texts), labels)


def all_premise_stub():
    return train_model(
        ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1}),
        PROVIDER.embed_batch(["anything at all.", "whatever else."]),
        ["premise", "premise"],
    )


def constant_score_model(positive_score, n_trees=10):
    """Forest stub voting a fixed fraction for class 1, whatever the input."""
    ones = round(positive_score * n_trees)
    spec = ModelSpec(family=ModelFamily.RANDOM_FOREST, hyperparams={"n_trees": n_trees}).normalized()
    return TrainedModel(
        spec=spec,
        classes=(0, 1),
        feature_dim=PROVIDER.dimension,
        params={"trees": [{"leaf": 1}] * ones + [{"leaf": 0}] * (n_trees - ones)},
    )


def sentences_of(body):
    return segment_sentences(body)


class TestExtractComponents:
    def test_default_claim_rule_fires_on_all_premise(self):
        sents = sentences_of("One thing. Another thing. Third thing.")
        labeled, rule = extract_components_detailed(sents, all_premise_stub(), PROVIDER)
        assert rule
        assert [c for _, c in labeled] == [ComponentLabel.CLAIM, ComponentLabel.PREMISE, ComponentLabel.PREMISE]

    def test_rule_not_triggered_when_claim_present(self):
        texts = ["Dogs are the best pets.", "They keep you active."]
        model = teach_knn(texts, ["claim", "premise"])
        sents = sentences_of(" ".join(texts))
        labeled, rule = extract_components_detailed(sents, model, PROVIDER)
        assert not rule
        assert [c for _, c in labeled] == [ComponentLabel.CLAIM, ComponentLabel.PREMISE]

    def test_single_non_argument_becomes_claim(self):
        model = teach_knn(["Thanks for reading this.", "Signed, me."], ["non_argument", "non_argument"])
        sents = sentences_of("Thanks for reading this.")
        labeled = extract_components(sents, model, PROVIDER)
        assert labeled == [(0, ComponentLabel.CLAIM)]

    def test_empty_sentence_list_rejected(self):
        with pytest.raises(ValueError):
            extract_components([], all_premise_stub(), PROVIDER)


def make_post(post_id, components, edges, topic="t", strategies=None):
    texts = [f"Sentence number {i} of {post_id}." for i in range(len(components))]
    body = " ".join(texts)
    sents = segment_sentences(body)
    assert len(sents) == len(components)
    annotations = []
    for i, comp in enumerate(components):
        strat = frozenset()
        if comp == "premise":
            strat = frozenset((strategies or {}).get(i, {StrategyLabel.LOGOS}))
        annotations.append(SentenceAnnotation(sentence_index=i, component=ComponentLabel(comp), strategies=strat))
    return AnnotatedPost(
        post_id=post_id,
        topic=topic,
        body=body,
        delta=1,
        sentences=tuple(sents),
        annotations=tuple(annotations),
        edges=tuple(SupportEdge(*e) for e in edges),
    )


class TestGenerateRelationPairs:
    def test_forced_single_choice(self):
        post = make_post("p", ["claim", "premise", "premise"], [(1, 0, 1)])
        gen = generate_relation_pairs(Corpus(posts=(post,)), seed=0)
        assert gen.positives == 1 and gen.negatives == 1 and gen.shortfall == 0
        neg = next(p for p in gen.pairs if p.label == 0)
        assert (neg.premise_index, neg.claim_index) == (2, 0)

    def test_shortfall_reported(self):
        post = make_post("p", ["claim", "premise", "premise", "premise"], [(1, 0, 1), (2, 0, 1)])
        gen = generate_relation_pairs(Corpus(posts=(post,)), seed=0)
        assert gen.positives == 2
        assert gen.negatives == 1
        assert gen.shortfall == 1

    def test_deterministic_per_seed(self):
        posts = tuple(
            make_post(f"p{i}", ["claim", "premise", "premise", "premise"], [(1, 0, 1)]) for i in range(4)
        )
        corpus = Corpus(posts=posts)
        a = generate_relation_pairs(corpus, seed=3)
        b = generate_relation_pairs(corpus, seed=3)
        assert a == b
        c = generate_relation_pairs(corpus, seed=4)
        assert a.positives == c.positives

    def test_empty_corpus(self):
        gen = generate_relation_pairs(Corpus(), seed=0)
        assert gen.pairs == () and gen.shortfall == 0


class TestDetectRelations:
    def _pair_model(self, claim_texts, premise_texts, labels):
        rows = []
        for ct, pt in zip(claim_texts, premise_texts):
            rows.append(pair_features(PROVIDER.embed(ct), PROVIDER.embed(pt)))
        # Far-away filler row keeps the training set above the size floor
        # without ever being anyone's nearest neighbor.
        rows.append(np.full(rows[0].shape[0], 100.0))
        return train_model(ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1}), np.stack(rows), labels + [0])

    def test_single_supported_pair(self):
        body = "Cats rule the house. They ignore all commands."
        sents = sentences_of(body)
        model = self._pair_model([sents[0].text], [sents[1].text], [1])
        edges = detect_relations([sents[0]], [sents[1]], model, PROVIDER)
        assert edges == [DetectedEdge(premise_index=1, claim_index=0)]

    def test_multi_support_allowed(self):
        body = "Claim one here. Claim two here. Shared supporting reason."
        sents = sentences_of(body)
        model = self._pair_model(
            [sents[0].text, sents[1].text],
            [sents[2].text, sents[2].text],
            [1, 1],
        )
        edges = detect_relations(sents[:2], [sents[2]], model, PROVIDER)
        assert {(e.premise_index, e.claim_index) for e in edges} == {(2, 0), (2, 1)}

    def test_fallback_attaches_to_nearest_preceding_claim(self):
        body = "Claim one here. Claim two here. Unconnected premise text."
        sents = sentences_of(body)
        model = self._pair_model(
            [sents[0].text, sents[1].text],
            [sents[2].text, sents[2].text],
            [0, 0],
        )
        edges = detect_relations(sents[:2], [sents[2]], model, PROVIDER)
        assert edges == [DetectedEdge(premise_index=2, claim_index=1, fallback=True)]

    def test_no_claims_rejected(self):
        with pytest.raises(ValueError):
            detect_relations([], sentences_of("A premise."), all_premise_stub(), PROVIDER)


class TestClassifyPremises:
    def _models(self, scores):
        return {
            StrategyLabel.LOGOS: constant_score_model(scores[0]),
            StrategyLabel.PATHOS: constant_score_model(scores[1]),
            StrategyLabel.ETHOS: constant_score_model(scores[2]),
            StrategyLabel.EVIDENCE: constant_score_model(scores[3]),
        }

    def test_threshold_inclusion(self):
        premises = sentences_of("Some premise text here.")
        got = classify_premises(premises, self._models([0.9, 0.1, 0.1, 0.6]), PROVIDER)
        assert got == [frozenset({StrategyLabel.LOGOS, StrategyLabel.EVIDENCE})]

    def test_fallback_to_best_single(self):
        premises = sentences_of("Some premise text here.")
        got = classify_premises(premises, self._models([0.1, 0.4, 0.2, 0.3]), PROVIDER)
        assert got == [frozenset({StrategyLabel.PATHOS})]

    def test_boundary_half_included(self):
        premises = sentences_of("Some premise text here.")
        got = classify_premises(premises, self._models([0.5, 0.0, 0.0, 0.0]), PROVIDER)
        assert got == [frozenset({StrategyLabel.LOGOS})]

    def test_missing_model_rejected(self):
        models = self._models([0.9, 0.1, 0.1, 0.6])
        del models[StrategyLabel.ETHOS]
        with pytest.raises(ValueError, match="ethos"):
            classify_premises(sentences_of("Text."), models, PROVIDER)

    def test_never_empty_property(self):
        rng = np.random.default_rng(0)
        premises = sentences_of("Premise one. Premise two. Premise three.")
        for _ in range(10):
            scores = [float(s) for s in np.round(rng.uniform(0, 1, size=4), 1)]
            got = classify_premises(premises, self._models(scores), PROVIDER)
            assert all(s and s <= set(StrategyLabel) for s in got)


class TestBuildArgumentTree:
    def test_two_node_tree(self):
        tree = build_argument_tree(
            [(0, ComponentLabel.CLAIM), (1, ComponentLabel.PREMISE)],
            {1: frozenset({StrategyLabel.LOGOS})},
            [DetectedEdge(premise_index=1, claim_index=0)],
        )
        assert len(tree.nodes) == 2 and len(tree.edges) == 1

    def test_claim_only_tree(self):
        tree = build_argument_tree([(0, ComponentLabel.CLAIM)], {}, [])
        assert tree.nodes[0].component is ComponentLabel.CLAIM and tree.edges == ()

    def test_duplicate_index_rejected(self):
        with pytest.raises(ValueError):
            build_argument_tree([(0, ComponentLabel.CLAIM), (0, ComponentLabel.PREMISE)], {}, [])

    def test_edge_type_mismatch_rejected(self):
        with pytest.raises(ValueError):
            build_argument_tree(
                [(0, ComponentLabel.CLAIM), (1, ComponentLabel.PREMISE)],
                {},
                [DetectedEdge(premise_index=0, claim_index=1)],
            )

    def test_no_claim_rejected(self):
        with pytest.raises(ValueError):
            build_argument_tree([(0, ComponentLabel.PREMISE)], {}, [])


def three_blobs(n_per=30, d=6, seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([[4.0] * d, [-4.0] * d, [4.0] * (d // 2) + [-4.0] * (d - d // 2)])
    X = np.vstack([rng.normal(loc=c, scale=0.6, size=(n_per, d)) for c in centers])
    y = [f"class{i}" for i in range(3) for _ in range(n_per)]
    return X, y


class TestCrossValidate:
    def test_fold_partition_properties(self):
        X, y = three_blobs()
        folds = stratified_fold_indices(X, y, k=5, seed=1)
        flat = np.concatenate(folds)
        assert sorted(flat.tolist()) == list(range(len(y)))
        for cls in set(y):
            sizes = [sum(1 for i in fold if y[i] == cls) for fold in folds]
            assert max(sizes) - min(sizes) <= 1

    def test_small_class_rejected_by_name(self):
        X = np.arange(16, dtype=np.float64).reshape(8, 2)
        y = ["a"] * 6 + ["rare"] * 2
        with pytest.raises(ValueError, match="rare"):
            stratified_fold_indices(X, y, k=5, seed=0)

    def test_oracle_spec_wins_with_perfect_f1(self):
        # Features literally encode the label, so 1-NN is a perfect oracle.
        rng = np.random.default_rng(5)
        y = [int(v) for v in rng.integers(0, 2, size=40)]
        X = np.array([[float(v), 1.0 - float(v)] for v in y])
        oracle = ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1})
        report = cross_validate(TaskKind.RELATION_DETECTION, [oracle], X, y, k=5, seed=2)
        assert report.entries[0].weighted_f1 == pytest.approx(1.0)
        assert report.winner == oracle.normalized()

    def test_oracle_beats_majority_vote(self):
        rng = np.random.default_rng(6)
        y = [int(v) for v in rng.integers(0, 2, size=30)]
        y[:20] = [0] * 20  # imbalanced so the majority vote is wrong often
        X = np.array([[float(v), 1.0 - float(v)] for v in y])
        oracle = ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1})
        majority = ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 24})
        report = cross_validate(TaskKind.RELATION_DETECTION, [majority, oracle], X, y, k=5, seed=2)
        assert report.winner == oracle.normalized()

    def test_five_real_specs_on_blobs(self):
        X, y = three_blobs()
        report = cross_validate(TaskKind.COMPONENT_EXTRACTION, default_specs(seed=3), X, y, k=5, seed=3)
        assert report.entries[report.winner_index].weighted_f1 >= 0.95

    def test_report_byte_identical_across_runs(self):
        X, y = three_blobs(n_per=10, d=4, seed=2)
        specs = [ModelSpec(family=ModelFamily.GAUSSIAN_NB), ModelSpec(family=ModelFamily.KNN)]
        a = cross_validate(TaskKind.COMPONENT_EXTRACTION, specs, X, y, k=5, seed=9)
        b = cross_validate(TaskKind.COMPONENT_EXTRACTION, specs, X, y, k=5, seed=9)
        dump = lambda r: json.dumps(r.to_json_dict(), sort_keys=True)
        assert dump(a) == dump(b)

    def test_winner_invariant_under_permutation(self):
        X, y = three_blobs(n_per=12, d=4, seed=4)
        specs = [ModelSpec(family=ModelFamily.LINEAR_SVM), ModelSpec(family=ModelFamily.KNN)]
        report = cross_validate(TaskKind.COMPONENT_EXTRACTION, specs, X, y, k=3, seed=5)
        rng = np.random.default_rng(0)
        perm = rng.permutation(len(y))
        permuted = cross_validate(
            TaskKind.COMPONENT_EXTRACTION, specs, X[perm], [y[i] for i in perm], k=3, seed=5
        )
        assert json.dumps(report.to_json_dict(), sort_keys=True) == json.dumps(permuted.to_json_dict(), sort_keys=True)

    def test_premise_task_weighted_f1(self):
        # All four strategies share one well-separated binary signal, so a
        # 1-NN oracle is exact on every per-strategy fold.
        rng = np.random.default_rng(8)
        n = 40
        bits = [int(v) for v in rng.integers(0, 2, size=n)]
        bits[:5] = [1] * 5
        bits[5:10] = [0] * 5
        labels = {s: list(bits) for s in StrategyLabel}
        X = np.array([[10.0 * b + 0.01 * i, 10.0 * (1 - b)] for i, b in enumerate(bits)])
        oracle = ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 1})
        report = cross_validate(TaskKind.PREMISE_CLASSIFICATION, [oracle], X, labels, k=5, seed=0)
        assert report.entries[0].weighted_f1 == pytest.approx(1.0)
        assert set(report.entries[0].per_class) == {"logos", "pathos", "ethos", "evidence"}


class TestFitFinalAndTest:
    def test_oracle_separable_test_f1(self):
        X, y = three_blobs(n_per=20, d=4, seed=6)
        rng = np.random.default_rng(1)
        idx = rng.permutation(len(y))
        train_idx, test_idx = idx[:45], idx[45:]
        metrics = fit_final_and_test(
            TaskKind.COMPONENT_EXTRACTION,
            ModelSpec(family=ModelFamily.KNN, hyperparams={"k": 3}),
            (X[train_idx], [y[i] for i in train_idx]),
            (X[test_idx], [y[i] for i in test_idx]),
        )
        assert metrics.weighted_f1 == pytest.approx(1.0)
