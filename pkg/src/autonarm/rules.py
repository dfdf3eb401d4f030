"""Association rules and the real-vector codec the inner miner searches over.

A candidate rule lives in [0, 1]^(4A + 1) for a database with A attributes:
four genes per attribute (priority, two bound genes, an inclusion gate)
plus one trailing gene that splits the included attributes into antecedent
and consequent.  Decoding is total and deterministic: every vector maps to
either a valid rule or None (too few attributes gated in).
"""

import math
from dataclasses import dataclass

import numpy as np

from .dataset import TransactionDatabase

__all__ = [
    "IntervalCondition",
    "CategoryCondition",
    "Condition",
    "Rule",
    "CODEC_VERSION",
    "rule_dimension",
    "decode_rule",
    "satisfies",
    "format_rule",
    "rule_record",
]

# Recorded in reports so result files are traceable to the codec layout.
CODEC_VERSION = "interval-gate-v1"


@dataclass(frozen=True)
class IntervalCondition:
    """attribute value in [low, high], both ends included."""

    attribute: int
    low: float
    high: float


@dataclass(frozen=True)
class CategoryCondition:
    """attribute value equals a category."""

    attribute: int
    category: str


Condition = IntervalCondition | CategoryCondition


@dataclass(frozen=True)
class Rule:
    """Implication between two non-empty, attribute-disjoint condition lists."""

    antecedent: tuple[Condition, ...]
    consequent: tuple[Condition, ...]

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError("both rule sides must be non-empty")
        attrs = [c.attribute for c in self.antecedent + self.consequent]
        if len(set(attrs)) != len(attrs):
            raise ValueError("an attribute may appear only once in a rule")


def rule_dimension(db: TransactionDatabase) -> int:
    """Length of the codec vector: 4 genes per attribute plus the cut gene."""
    return 4 * db.n_attributes + 1


def _condition_for(db: TransactionDatabase, j: int, v1: float, v2: float) -> Condition:
    attr = db.attributes[j]
    if attr.is_numeric:
        lo, hi = (v1, v2) if v1 <= v2 else (v2, v1)
        span = attr.max - attr.min
        return IntervalCondition(j, attr.min + lo * span, attr.min + hi * span)
    k = len(attr.categories)
    index = min(int(v1 * k), k - 1)
    return CategoryCondition(j, attr.categories[index])


def decode_rule(x: np.ndarray, db: TransactionDatabase) -> Rule | None:
    """Decode a codec vector into a rule, or None if fewer than two
    attributes pass the inclusion gate.

    Per attribute j the genes are (priority, v1, v2, gate) = x[4j:4j+4].
    An attribute is included iff gate > 0.5.  Numeric attributes get the
    closed interval spanned by v1 and v2 mapped onto the attribute domain;
    categorical ones get category index min(floor(v1 * k), k - 1).
    Included attributes are ordered by priority (descending, ties by
    attribute index) and the final gene c places the first
    max(1, min(m - 1, round(c * m))) of the m attributes in the antecedent.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (rule_dimension(db),):
        raise ValueError(
            f"expected vector of length {rule_dimension(db)}, got {x.shape}"
        )
    included = [
        (-x[4 * j], j) for j in range(db.n_attributes) if x[4 * j + 3] > 0.5
    ]
    m = len(included)
    if m < 2:
        return None
    included.sort()
    conditions = [
        _condition_for(db, j, x[4 * j + 1], x[4 * j + 2]) for _, j in included
    ]
    cut = max(1, min(m - 1, math.floor(x[4 * db.n_attributes] * m + 0.5)))
    return Rule(tuple(conditions[:cut]), tuple(conditions[cut:]))


def satisfies(conditions: tuple[Condition, ...], row: tuple) -> bool:
    """True iff the row meets every condition (empty list is satisfied)."""
    for cond in conditions:
        cell = row[cond.attribute]
        if isinstance(cond, IntervalCondition):
            if not cond.low <= cell <= cond.high:
                return False
        elif cell != cond.category:
            return False
    return True


def _condition_text(cond: Condition, db: TransactionDatabase) -> str:
    name = db.attributes[cond.attribute].name
    if isinstance(cond, IntervalCondition):
        return f"{name} ∈ [{cond.low:g}, {cond.high:g}]"
    return f"{name} = {cond.category}"


def format_rule(rule: Rule, db: TransactionDatabase) -> str:
    """Human-readable form, e.g. ``A ∈ [2, 9] ∧ B = r ⟹ C ∈ [0, 1]``."""
    left = " ∧ ".join(_condition_text(c, db) for c in rule.antecedent)
    right = " ∧ ".join(_condition_text(c, db) for c in rule.consequent)
    return f"{left} ⟹ {right}"


def _condition_record(cond: Condition, db: TransactionDatabase) -> dict:
    record: dict = {"attribute": db.attributes[cond.attribute].name}
    if isinstance(cond, IntervalCondition):
        record["interval"] = [cond.low, cond.high]
    else:
        record["category"] = cond.category
    return record


def rule_record(rule: Rule, db: TransactionDatabase) -> dict:
    """Structured form of a rule for JSON reports."""
    return {
        "antecedent": [_condition_record(c, db) for c in rule.antecedent],
        "consequent": [_condition_record(c, db) for c in rule.consequent],
        "text": format_rule(rule, db),
    }
