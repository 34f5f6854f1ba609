"""Multinomial logistic regression via full-batch gradient descent.

Minimizes mean cross-entropy plus an L2 penalty on the weights (bias
unpenalized) until the loss change drops below ``CONVERGENCE_TOL`` or the
epoch cap is hit. Weights start at zero, so the whole fit is deterministic.
"""

from __future__ import annotations

import numpy as np

CONVERGENCE_TOL = 1e-7


def loss_and_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    X: np.ndarray,
    y_idx: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Regularized loss and its analytic gradient at (weights, bias).

    loss = -mean log softmax(X W^T + b)[y] + 0.5 * l2 * ||W||^2
    """
    n = X.shape[0]
    logits = X @ weights.T + bias
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_p = shifted - log_z
    loss = -log_p[np.arange(n), y_idx].mean() + 0.5 * l2 * float((weights**2).sum())
    probs = np.exp(log_p)
    probs[np.arange(n), y_idx] -= 1.0
    grad_w = probs.T @ X / n + l2 * weights
    grad_b = probs.mean(axis=0)
    return float(loss), grad_w, grad_b


def fit(
    hp: dict,
    X: np.ndarray,
    y_idx: np.ndarray,
    n_classes: int,
    seed: int,
) -> tuple[dict, list[float]]:
    lr = hp["lr"]
    l2 = hp["l2"]
    epochs = hp["epochs"]
    weights = np.zeros((n_classes, X.shape[1]))
    bias = np.zeros(n_classes)
    losses: list[float] = []
    prev = np.inf
    for _ in range(epochs):
        loss, grad_w, grad_b = loss_and_grad(weights, bias, X, y_idx, l2)
        losses.append(loss)
        if abs(prev - loss) < CONVERGENCE_TOL:
            break
        prev = loss
        weights -= lr * grad_w
        bias -= lr * grad_b
    return {"weights": weights, "bias": bias}, losses


def scores(params: dict, X: np.ndarray) -> np.ndarray:
    """Softmax class probabilities, rows summing to 1."""
    logits = X @ params["weights"].T + params["bias"]
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)
