"""One inner mining run: optimize rule vectors, archive every useful rule.

The miner drives an optimizer over the rule codec space.  Its objective
decodes each candidate and scores it with the weighted metric fitness; an
evaluation observer admits every distinct valid rule with positive fitness
into the archive.  The archive's mean support and confidence are the raw
material for the pipeline-level fitness.
"""

from dataclasses import dataclass

from .dataset import TransactionDatabase
from .metrics import (
    MetricKind,
    MetricVector,
    metrics_from_counts,
    rule_counts,
    weighted_score,
)
from .optimizers import OptimizerBudget, OptimizerKind, optimize
from .rules import Rule, decode_rule, rule_dimension

__all__ = ["ArchiveEntry", "RuleArchive", "mine"]


@dataclass(frozen=True)
class ArchiveEntry:
    rule: Rule
    metrics: MetricVector
    fitness: float


@dataclass
class RuleArchive:
    """Deduplicated rules discovered in one run, with summary means."""

    entries: list[ArchiveEntry]
    mean_support: float
    mean_confidence: float

    @classmethod
    def from_entries(cls, entries: list[ArchiveEntry]) -> "RuleArchive":
        if not entries:
            return cls([], 0.0, 0.0)
        n = len(entries)
        return cls(
            entries,
            sum(e.metrics[MetricKind.SUPPORT] for e in entries) / n,
            sum(e.metrics[MetricKind.CONFIDENCE] for e in entries) / n,
        )

    def __len__(self) -> int:
        return len(self.entries)


def mine(
    db: TransactionDatabase,
    kind: OptimizerKind,
    budget: OptimizerBudget,
    selected: tuple[MetricKind, ...],
    weights: dict[MetricKind, float],
) -> RuleArchive:
    """Run one rule-mining optimization and collect the rule archive.

    Every evaluated vector that decodes to a valid rule with fitness > 0 is
    archived once (identity = exact equality of the decoded condition
    lists).  Returns an empty archive when nothing qualified.
    """
    selected = tuple(selected)
    if not selected:
        raise ValueError("at least one metric must be selected")

    seen: dict[Rule, ArchiveEntry] = {}
    last: list = [None]  # (rule, metrics, fitness) of the latest evaluation

    def objective(x) -> float:
        rule = decode_rule(x, db)
        if rule is None:
            last[0] = None
            return -1.0
        values = metrics_from_counts(*rule_counts(rule, db), db.n_transactions)
        fitness = weighted_score(values, selected, weights)
        last[0] = (rule, values, fitness)
        return fitness

    def observer(index: int, x, f: float) -> None:
        if last[0] is None:
            return
        rule, values, fitness = last[0]
        if fitness > 0.0 and rule not in seen:
            seen[rule] = ArchiveEntry(rule, values, fitness)

    optimize(kind, objective, rule_dimension(db), budget, callback=observer)
    return RuleArchive.from_entries(list(seen.values()))
