"""k-nearest-neighbor classifier over the stored training set.

Euclidean metric; neighbor distance ties resolve by training index (stable
sort). Scores are plain vote fractions among the k neighbors, unweighted by
rank or distance. Tolerates a single-class training set.
"""

from __future__ import annotations

import numpy as np


def fit(hp: dict, X: np.ndarray, y_idx: np.ndarray, n_classes: int, seed: int) -> dict:
    return {"train_x": X.copy(), "train_y": y_idx.copy()}


def scores(params: dict, X: np.ndarray, k: int, n_classes: int) -> np.ndarray:
    train_x = params["train_x"]
    train_y = params["train_y"]
    k_eff = min(k, train_x.shape[0])
    out = np.zeros((X.shape[0], n_classes))
    for i, x in enumerate(X):
        dist_sq = ((train_x - x) ** 2).sum(axis=1)
        nearest = np.argsort(dist_sq, kind="stable")[:k_eff]
        votes = np.bincount(train_y[nearest], minlength=n_classes)
        out[i] = votes / k_eff
    return out
