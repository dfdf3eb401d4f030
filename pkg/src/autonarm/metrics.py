"""Rule quality metrics and the weighted inner fitness.

All six metrics derive from three satisfaction fractions over the database:
s(X) for the antecedent, s(Y) for the consequent and s(XY) for both sides
jointly.  Ratios with a zero denominator evaluate to 0 by contract, so the
inner optimizer can rank degenerate rules without aborting.
"""

from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .dataset import TransactionDatabase
from .rules import CategoryCondition, Condition, Rule

__all__ = [
    "MetricKind",
    "METRIC_POOL",
    "MetricVector",
    "rule_counts",
    "metrics_from_counts",
    "evaluate_metric",
    "evaluate_all",
    "inner_fitness",
    "weighted_score",
]


class MetricKind(Enum):
    SUPPORT = "Supp"
    CONFIDENCE = "Conf"
    COVERAGE = "Cover"
    AMPLITUDE = "Amp"
    INCLUSION = "Incl"
    COMPREHENSIBILITY = "Comp"


# Fixed pool order used by the pipeline genotype.
METRIC_POOL: tuple[MetricKind, ...] = tuple(MetricKind)

MetricVector = dict[MetricKind, float]


def _mask(conditions: Iterable[Condition], db: TransactionDatabase) -> np.ndarray:
    out = np.ones(db.n_transactions, dtype=bool)
    for cond in conditions:
        col = db.column(cond.attribute)
        if isinstance(cond, CategoryCondition):
            out &= col == db.category_code(cond.attribute, cond.category)
        else:
            out &= (col >= cond.low) & (col <= cond.high)
    return out


def rule_counts(rule: Rule, db: TransactionDatabase) -> tuple[int, int, int]:
    """Transaction counts (n_x, n_y, n_xy) for the rule's sides."""
    mask_x = _mask(rule.antecedent, db)
    mask_y = _mask(rule.consequent, db)
    return int(mask_x.sum()), int(mask_y.sum()), int((mask_x & mask_y).sum())


def metrics_from_counts(n_x: int, n_y: int, n_xy: int, n: int) -> MetricVector:
    """All six metrics from side counts over n transactions."""
    s_x = n_x / n
    s_y = n_y / n
    s_xy = n_xy / n
    confidence = s_xy / s_x if n_x else 0.0
    return {
        MetricKind.SUPPORT: s_xy,
        MetricKind.CONFIDENCE: confidence,
        MetricKind.COVERAGE: s_y,
        MetricKind.AMPLITUDE: confidence - s_y,
        MetricKind.INCLUSION: confidence,
        MetricKind.COMPREHENSIBILITY: s_xy / s_y if n_y else 0.0,
    }


def evaluate_all(rule: Rule, db: TransactionDatabase) -> MetricVector:
    return metrics_from_counts(*rule_counts(rule, db), db.n_transactions)


def evaluate_metric(kind: MetricKind, rule: Rule, db: TransactionDatabase) -> float:
    return evaluate_all(rule, db)[kind]


def weighted_score(
    values: MetricVector,
    selected: Iterable[MetricKind],
    weights: Mapping[MetricKind, float],
) -> float:
    """Normalized weighted sum of the selected metrics."""
    selected = tuple(selected)
    if not selected:
        raise ValueError("at least one metric must be selected")
    total = 0.0
    weight_sum = 0.0
    for kind in selected:
        w = weights[kind]
        if w <= 0.0:
            raise ValueError(f"weight for {kind.value} must be > 0")
        total += w * values[kind]
        weight_sum += w
    return total / weight_sum


def inner_fitness(
    rule: Rule | None,
    db: TransactionDatabase,
    selected: Iterable[MetricKind],
    weights: Mapping[MetricKind, float],
) -> float:
    """Fitness of a decoded rule; invalid decodes score the -1 sentinel."""
    if rule is None:
        selected = tuple(selected)
        if not selected:
            raise ValueError("at least one metric must be selected")
        return -1.0
    return weighted_score(evaluate_all(rule, db), selected, weights)
