"""Persuasive-strategy portfolios, ratio vectors, and difference bars.

A portfolio counts weighted label occurrences over the argumentative
sentences of a text: each claim contributes 1 to the claim category and each
premise splits a total contribution of exactly 1 evenly over its k strategy
labels (1/k apiece; 0.5 each in the common two-label case). Weights are kept
as exact rationals so the conservation law ``sum(weights) == sentences``
holds without tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .corpus import AnnotatedPost, ComponentLabel, SentenceAnnotation, STRATEGY_ORDER

#: Canonical category order shared by every portfolio-shaped payload.
CATEGORIES: tuple[str, ...] = ("claim",) + tuple(s.value for s in STRATEGY_ORDER)

RATIO_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Portfolio:
    """Weighted label counts over argumentative (claim or premise) sentences."""

    weights: dict[str, Fraction]
    total_sentences: int

    def weight_floats(self) -> dict[str, float]:
        return {c: float(self.weights[c]) for c in CATEGORIES}

    def to_json_dict(self) -> dict[str, Any]:
        return {"weights": self.weight_floats(), "total_sentences": self.total_sentences}


@dataclass(frozen=True)
class RatioVector:
    """Point on the 5-simplex, ordered (claim, logos, pathos, ethos, evidence)."""

    values: tuple[float, float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.values) != len(CATEGORIES):
            raise ValueError(f"ratio vector needs {len(CATEGORIES)} components")
        if any(v < -RATIO_SUM_TOL or v > 1.0 + RATIO_SUM_TOL for v in self.values):
            raise ValueError(f"ratio components must lie in [0, 1]: {self.values}")
        if abs(sum(self.values) - 1.0) > RATIO_SUM_TOL:
            raise ValueError(f"ratio components must sum to 1, got {sum(self.values)}")

    def by_category(self) -> dict[str, float]:
        return dict(zip(CATEGORIES, self.values))

    @staticmethod
    def from_mapping(mapping: dict[str, float]) -> "RatioVector":
        missing = [c for c in CATEGORIES if c not in mapping]
        if missing:
            raise ValueError(f"ratio mapping missing categories {missing}")
        return RatioVector(values=tuple(float(mapping[c]) for c in CATEGORIES))


@dataclass(frozen=True)
class DifferenceBar:
    """Signed percentage-point gap (user minus reference) for one category."""

    category: str
    value: float
    deficient: bool


def build_portfolio(annotations: Iterable[SentenceAnnotation]) -> Portfolio:
    """Aggregate annotations into a portfolio; non-arguments are excluded."""
    weights: dict[str, Fraction] = {c: Fraction(0) for c in CATEGORIES}
    total = 0
    for ann in annotations:
        if ann.component is ComponentLabel.NON_ARGUMENT:
            continue
        total += 1
        if ann.component is ComponentLabel.CLAIM:
            weights["claim"] += 1
        else:
            if not ann.strategies:
                raise ValueError(f"premise {ann.sentence_index} carries no strategy label")
            share = Fraction(1, len(ann.strategies))
            for strategy in ann.strategies:
                weights[strategy.value] += share
    if total == 0:
        raise ValueError("portfolio needs at least one claim or premise")
    return Portfolio(weights=weights, total_sentences=total)


def ratios(portfolio: Portfolio) -> RatioVector:
    return RatioVector(
        values=tuple(float(portfolio.weights[c] / portfolio.total_sentences) for c in CATEGORIES)
    )


def average_portfolio(portfolios: Sequence[Portfolio]) -> RatioVector:
    """Unweighted mean of the member ratio vectors (one vote per example)."""
    if not portfolios:
        raise ValueError("average_portfolio needs at least one portfolio")
    sums = [Fraction(0)] * len(CATEGORIES)
    for p in portfolios:
        for i, c in enumerate(CATEGORIES):
            sums[i] += Fraction(p.weights[c], p.total_sentences)
    n = len(portfolios)
    return RatioVector(values=tuple(float(s / n) for s in sums))


def portfolio_difference(user: RatioVector, reference: RatioVector) -> list[DifferenceBar]:
    """Percentage-point bars (user - reference), most deficient first.

    Bars sort ascending by value; equal values keep category order. Because
    both inputs live on the simplex, the bars always sum to zero.
    """
    bars = [
        DifferenceBar(category=c, value=(u - r) * 100.0, deficient=(u - r) < 0)
        for c, u, r in zip(CATEGORIES, user.values, reference.values)
    ]
    bars.sort(key=lambda b: b.value)
    return bars


def rank_examples_by_delta(posts: Sequence[AnnotatedPost]) -> list[str]:
    """Post ids sorted by delta descending; ties keep the input order."""
    return [p.post_id for p in sorted(posts, key=lambda p: -p.delta)]
