"""Random forest of Gini-split decision trees with bootstrap resampling.

Every tree draws its bootstrap sample and per-node feature subsets (sqrt of
the feature count) from an RNG stream derived from (seed, tree index), so
trees could be built in parallel without changing the result. Prediction is a
hard vote per tree; forest scores are vote fractions.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def _majority(counts: np.ndarray) -> int:
    # argmax takes the first maximum, i.e. the lowest class index on ties.
    return int(np.argmax(counts))


def _best_split(
    X: np.ndarray,
    y_idx: np.ndarray,
    rows: np.ndarray,
    features: np.ndarray,
    n_classes: int,
    min_leaf: int,
) -> tuple[int, float] | None:
    n = rows.shape[0]
    counts = np.bincount(y_idx[rows], minlength=n_classes).astype(np.float64)
    base = _gini(counts)
    best_gain = 1e-12
    best: tuple[int, float] | None = None
    for f in features:
        values = X[rows, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        sy = y_idx[rows][order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), sy] = 1.0
        left_counts = onehot.cumsum(axis=0)
        boundaries = np.nonzero(sv[1:] != sv[:-1])[0] + 1
        for i in boundaries:
            if i < min_leaf or n - i < min_leaf:
                continue
            gl = _gini(left_counts[i - 1])
            gr = _gini(counts - left_counts[i - 1])
            gain = base - (i / n) * gl - ((n - i) / n) * gr
            if gain > best_gain:
                best_gain = gain
                best = (int(f), float((sv[i - 1] + sv[i]) / 2.0))
    return best


def _build_tree(
    X: np.ndarray,
    y_idx: np.ndarray,
    rows: np.ndarray,
    rng: np.random.Generator,
    n_classes: int,
    max_depth: int,
    min_leaf: int,
    n_feature_samples: int,
    depth: int,
) -> dict[str, Any]:
    counts = np.bincount(y_idx[rows], minlength=n_classes)
    if depth >= max_depth or rows.shape[0] < 2 * min_leaf or np.count_nonzero(counts) <= 1:
        return {"leaf": _majority(counts)}
    features = np.sort(rng.choice(X.shape[1], size=n_feature_samples, replace=False))
    split = _best_split(X, y_idx, rows, features, n_classes, min_leaf)
    if split is None:
        return {"leaf": _majority(counts)}
    f, threshold = split
    left_mask = X[rows, f] <= threshold
    left = _build_tree(X, y_idx, rows[left_mask], rng, n_classes, max_depth, min_leaf, n_feature_samples, depth + 1)
    right = _build_tree(X, y_idx, rows[~left_mask], rng, n_classes, max_depth, min_leaf, n_feature_samples, depth + 1)
    return {"f": f, "t": threshold, "l": left, "r": right}


def fit(hp: dict, X: np.ndarray, y_idx: np.ndarray, n_classes: int, seed: int) -> dict:
    n, d = X.shape
    n_feature_samples = max(1, min(d, int(math.sqrt(d))))
    trees = []
    for t in range(hp["n_trees"]):
        rng = np.random.default_rng([seed, t])
        rows = rng.integers(0, n, size=n)
        trees.append(
            _build_tree(X, y_idx, rows, rng, n_classes, hp["max_depth"], hp["min_leaf"], n_feature_samples, 0)
        )
    return {"trees": trees}


def _tree_vote(tree: dict[str, Any], x: np.ndarray) -> int:
    node = tree
    while "leaf" not in node:
        node = node["l"] if x[node["f"]] <= node["t"] else node["r"]
    return node["leaf"]


def scores(params: dict, X: np.ndarray, n_classes: int) -> np.ndarray:
    """Fraction of trees voting for each class."""
    trees = params["trees"]
    out = np.zeros((X.shape[0], n_classes))
    for i, x in enumerate(X):
        votes = np.bincount([_tree_vote(t, x) for t in trees], minlength=n_classes)
        out[i] = votes / len(trees)
    return out
