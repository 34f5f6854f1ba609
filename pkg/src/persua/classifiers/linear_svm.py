"""One-vs-rest linear SVM trained by epoch-shuffled subgradient descent.

Each class gets a binary hinge-loss objective with L2 on the weights. Sample
order is reshuffled every epoch from a per-class RNG derived from
(seed, class index), so the fit is deterministic and independent of the
caller's thread count.
"""

from __future__ import annotations

import numpy as np


def fit(hp: dict, X: np.ndarray, y_idx: np.ndarray, n_classes: int, seed: int) -> dict:
    lr = hp["lr"]
    l2 = hp["l2"]
    epochs = hp["epochs"]
    n, d = X.shape
    weights = np.zeros((n_classes, d))
    bias = np.zeros(n_classes)
    for ci in range(n_classes):
        target = np.where(y_idx == ci, 1.0, -1.0)
        w = np.zeros(d)
        b = 0.0
        rng = np.random.default_rng([seed, ci])
        for _ in range(epochs):
            for i in rng.permutation(n):
                margin = target[i] * (w @ X[i] + b)
                if margin < 1.0:
                    w -= lr * (l2 * w - target[i] * X[i])
                    b += lr * target[i]
                else:
                    w -= lr * l2 * w
        weights[ci] = w
        bias[ci] = b
    return {"weights": weights, "bias": bias}


def scores(params: dict, X: np.ndarray) -> np.ndarray:
    """Raw per-class margins (signed distances, unnormalized)."""
    return X @ params["weights"].T + params["bias"]
