"""From-scratch classifier families, prediction, and metric computation."""

from .metrics import ClassMetrics, ClassScore, evaluate_metrics
from .model import (
    ARTIFACT_FORMAT_VERSION,
    HYPERPARAM_DEFAULTS,
    ModelFamily,
    ModelSpec,
    TrainedModel,
    load_model,
    model_from_json_dict,
    model_to_bytes,
    model_to_json_dict,
    predict,
    predict_batch,
    predict_scores,
    save_model,
    train_model,
)

__all__ = [
    "ARTIFACT_FORMAT_VERSION",
    "HYPERPARAM_DEFAULTS",
    "ClassMetrics",
    "ClassScore",
    "ModelFamily",
    "ModelSpec",
    "TrainedModel",
    "evaluate_metrics",
    "load_model",
    "model_from_json_dict",
    "model_to_bytes",
    "model_to_json_dict",
    "predict",
    "predict_batch",
    "predict_scores",
    "save_model",
    "train_model",
]
