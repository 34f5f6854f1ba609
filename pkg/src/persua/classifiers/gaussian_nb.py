"""Gaussian naive Bayes with per-class diagonal variances.

Variances are floored at ``VARIANCE_FLOOR`` so constant features cannot
produce singular densities. Scores are posteriors (softmax over the joint
log-likelihoods), so they sum to 1.
"""

from __future__ import annotations

import numpy as np

VARIANCE_FLOOR = 1e-9


def fit(hp: dict, X: np.ndarray, y_idx: np.ndarray, n_classes: int, seed: int) -> dict:
    d = X.shape[1]
    means = np.zeros((n_classes, d))
    variances = np.zeros((n_classes, d))
    log_priors = np.zeros(n_classes)
    n = X.shape[0]
    for ci in range(n_classes):
        rows = X[y_idx == ci]
        means[ci] = rows.mean(axis=0)
        variances[ci] = np.maximum(rows.var(axis=0), VARIANCE_FLOOR)
        log_priors[ci] = np.log(rows.shape[0] / n)
    return {"means": means, "variances": variances, "log_priors": log_priors}


def log_joint(params: dict, X: np.ndarray) -> np.ndarray:
    """log p(class) + sum_d log N(x_d; mean, variance) per (sample, class)."""
    means = params["means"]
    variances = params["variances"]
    diff = X[:, None, :] - means[None, :, :]
    log_like = -0.5 * (np.log(2.0 * np.pi * variances)[None, :, :] + diff**2 / variances[None, :, :])
    return params["log_priors"][None, :] + log_like.sum(axis=2)


def scores(params: dict, X: np.ndarray) -> np.ndarray:
    joint = log_joint(params, X)
    shifted = joint - joint.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)
