"""Model specs, training dispatch, prediction, and the JSON artifact format.

Five classifier families are implemented in sibling modules. Training is
deterministic given (spec, X, y): the same inputs always serialize to
byte-identical artifacts. Prediction breaks score ties by the lowest class
id (classes are kept sorted, and argmax takes the first maximum).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Hashable, Sequence

import numpy as np

from . import forest, gaussian_nb, knn, linear_svm, logistic

ARTIFACT_FORMAT_VERSION = 1


class ModelFamily(str, Enum):
    LOGISTIC_REGRESSION = "logistic_regression"
    LINEAR_SVM = "linear_svm"
    RANDOM_FOREST = "random_forest"
    GAUSSIAN_NB = "gaussian_nb"
    KNN = "knn"


HYPERPARAM_DEFAULTS: dict[ModelFamily, dict[str, Any]] = {
    ModelFamily.LOGISTIC_REGRESSION: {"lr": 0.1, "l2": 1e-4, "epochs": 2000},
    ModelFamily.LINEAR_SVM: {"lr": 0.05, "l2": 1e-4, "epochs": 50},
    ModelFamily.RANDOM_FOREST: {"n_trees": 100, "max_depth": 12, "min_leaf": 2},
    ModelFamily.GAUSSIAN_NB: {},
    ModelFamily.KNN: {"k": 5},
}


@dataclass(frozen=True)
class ModelSpec:
    family: ModelFamily
    hyperparams: dict[str, Any] = field(default_factory=dict)
    seed: int = 42

    def normalized(self) -> "ModelSpec":
        """Fill defaults and validate hyperparameters for the family."""
        family = ModelFamily(self.family)
        defaults = HYPERPARAM_DEFAULTS[family]
        unknown = set(self.hyperparams) - set(defaults)
        if unknown:
            raise ValueError(f"{family.value}: unknown hyperparameters {sorted(unknown)}")
        hp = {**defaults, **self.hyperparams}
        for key, value in hp.items():
            if key in ("lr", "l2"):
                if not isinstance(value, (int, float)) or value < 0:
                    raise ValueError(f"{family.value}: {key} must be a non-negative number")
            else:
                if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                    raise ValueError(f"{family.value}: {key} must be a positive integer")
        return ModelSpec(family=family, hyperparams=hp, seed=self.seed)

    def to_json_dict(self) -> dict[str, Any]:
        return {"family": ModelFamily(self.family).value, "hyperparams": dict(self.hyperparams), "seed": self.seed}

    @staticmethod
    def from_json_dict(d: dict[str, Any]) -> "ModelSpec":
        return ModelSpec(family=ModelFamily(d["family"]), hyperparams=dict(d["hyperparams"]), seed=int(d["seed"]))


@dataclass(frozen=True)
class TrainedModel:
    """Immutable fitted classifier; safe for concurrent predict calls."""

    spec: ModelSpec
    classes: tuple[Hashable, ...]
    feature_dim: int
    params: dict[str, Any]


def train_model(spec: ModelSpec, X: Sequence[Sequence[float]] | np.ndarray, y: Sequence[Hashable]) -> TrainedModel:
    """Fit one classifier. Deterministic given (spec, X, y).

    Requires at least two samples of a single consistent dimension, and at
    least two distinct classes for every family except kNN.
    """
    spec = spec.normalized()
    X_arr = np.asarray(X, dtype=np.float64)
    if X_arr.ndim != 2:
        raise ValueError("X must be a 2-D array of feature vectors with one consistent dimension")
    n = X_arr.shape[0]
    if n != len(y):
        raise ValueError(f"got {n} vectors but {len(y)} labels")
    if n < 2:
        raise ValueError("training needs at least 2 samples")
    if not np.all(np.isfinite(X_arr)):
        raise ValueError("feature vectors must be finite")
    classes = tuple(sorted(set(y), key=str))
    if len(classes) < 2 and spec.family is not ModelFamily.KNN:
        raise ValueError(f"{spec.family.value}: training data has a single class {classes[0]!r}")
    class_index = {c: i for i, c in enumerate(classes)}
    y_idx = np.asarray([class_index[label] for label in y], dtype=np.int64)

    hp = spec.hyperparams
    if spec.family is ModelFamily.LOGISTIC_REGRESSION:
        params, _ = logistic.fit(hp, X_arr, y_idx, len(classes), spec.seed)
    elif spec.family is ModelFamily.LINEAR_SVM:
        params = linear_svm.fit(hp, X_arr, y_idx, len(classes), spec.seed)
    elif spec.family is ModelFamily.RANDOM_FOREST:
        params = forest.fit(hp, X_arr, y_idx, len(classes), spec.seed)
    elif spec.family is ModelFamily.GAUSSIAN_NB:
        params = gaussian_nb.fit(hp, X_arr, y_idx, len(classes), spec.seed)
    elif spec.family is ModelFamily.KNN:
        params = knn.fit(hp, X_arr, y_idx, len(classes), spec.seed)
    else:  # pragma: no cover
        raise ValueError(f"unknown family {spec.family!r}")
    return TrainedModel(spec=spec, classes=classes, feature_dim=int(X_arr.shape[1]), params=params)


def predict_scores(model: TrainedModel, X: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Per-class score matrix, one row per input vector.

    Score semantics by family: probabilities for logistic regression and
    Gaussian NB, margins for the linear SVM, vote fractions for the forest
    and kNN.
    """
    X_arr = np.asarray(X, dtype=np.float64)
    if X_arr.ndim == 1:
        X_arr = X_arr[None, :]
    if X_arr.shape[1] != model.feature_dim:
        raise ValueError(f"expected dimension {model.feature_dim}, got {X_arr.shape[1]}")
    n_classes = len(model.classes)
    family = model.spec.family
    if family is ModelFamily.LOGISTIC_REGRESSION:
        return logistic.scores(model.params, X_arr)
    if family is ModelFamily.LINEAR_SVM:
        return linear_svm.scores(model.params, X_arr)
    if family is ModelFamily.RANDOM_FOREST:
        return forest.scores(model.params, X_arr, n_classes)
    if family is ModelFamily.GAUSSIAN_NB:
        return gaussian_nb.scores(model.params, X_arr)
    if family is ModelFamily.KNN:
        return knn.scores(model.params, X_arr, model.spec.hyperparams["k"], n_classes)
    raise ValueError(f"unknown family {family!r}")  # pragma: no cover


def predict(model: TrainedModel, x: Sequence[float] | np.ndarray) -> tuple[Hashable, np.ndarray]:
    scores = predict_scores(model, np.asarray(x, dtype=np.float64)[None, :])[0]
    return model.classes[int(np.argmax(scores))], scores


def predict_batch(model: TrainedModel, X: Sequence[Sequence[float]] | np.ndarray) -> tuple[list[Hashable], np.ndarray]:
    scores = predict_scores(model, X)
    return [model.classes[int(i)] for i in np.argmax(scores, axis=1)], scores


# ---------------------------------------------------------------------------
# Artifact serialization
# ---------------------------------------------------------------------------


def _params_to_json(family: ModelFamily, params: dict[str, Any]) -> dict[str, Any]:
    if family is ModelFamily.RANDOM_FOREST:
        return {"trees": params["trees"]}
    out: dict[str, Any] = {}
    for key, value in params.items():
        arr = np.asarray(value)
        if key == "train_y":
            out[key] = [int(v) for v in arr]
        else:
            out[key] = arr.tolist()
    return out


def _params_from_json(family: ModelFamily, params: dict[str, Any]) -> dict[str, Any]:
    if family is ModelFamily.RANDOM_FOREST:
        return {"trees": params["trees"]}
    out: dict[str, Any] = {}
    for key, value in params.items():
        out[key] = np.asarray(value, dtype=np.int64 if key == "train_y" else np.float64)
    return out


def model_to_json_dict(model: TrainedModel) -> dict[str, Any]:
    return {
        "format_version": ARTIFACT_FORMAT_VERSION,
        "spec": model.spec.to_json_dict(),
        "classes": list(model.classes),
        "feature_dim": model.feature_dim,
        "params": _params_to_json(model.spec.family, model.params),
    }


def model_from_json_dict(d: dict[str, Any]) -> TrainedModel:
    if d.get("format_version") != ARTIFACT_FORMAT_VERSION:
        raise ValueError(f"unsupported artifact format_version {d.get('format_version')!r}")
    spec = ModelSpec.from_json_dict(d["spec"])
    return TrainedModel(
        spec=spec,
        classes=tuple(d["classes"]),
        feature_dim=int(d["feature_dim"]),
        params=_params_from_json(spec.family, d["params"]),
    )


def model_to_bytes(model: TrainedModel) -> bytes:
    return json.dumps(model_to_json_dict(model), sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_model(model: TrainedModel, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(model_to_bytes(model))


def load_model(path: str) -> TrainedModel:
    with open(path, "rb") as fh:
        return model_from_json_dict(json.loads(fh.read().decode("utf-8")))
