"""Per-class precision/recall/F1 and support-weighted average F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Sequence


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassMetrics:
    per_class: dict[Hashable, ClassScore]
    weighted_f1: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
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


def evaluate_metrics(
    y_true: Sequence[Hashable],
    y_pred: Sequence[Hashable],
    labels: Sequence[Hashable] | None = None,
) -> ClassMetrics:
    """Compute per-class P/R/F1 with the 0/0 -> 0 convention.

    ``labels`` fixes the class set (e.g. a model's classes); by default it is
    the sorted union of true and predicted labels. Classes with zero support
    report all-zero scores and are excluded from the weighted average
    ``sum(support_c / N * f1_c)``.
    """
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise ValueError("evaluate_metrics: empty input")
    if labels is None:
        labels = sorted(set(y_true) | set(y_pred), key=str)
    per_class: dict[Hashable, ClassScore] = {}
    total_support = 0
    weighted = 0.0
    for label in labels:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == label and p == label)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != label and p == label)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == label and p != label)
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        support = tp + fn
        per_class[label] = ClassScore(precision=precision, recall=recall, f1=f1, support=support)
        total_support += support
        weighted += support * f1
    return ClassMetrics(per_class=per_class, weighted_f1=_safe_div(weighted, total_support))
