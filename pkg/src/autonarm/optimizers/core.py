"""Shared machinery of the optimizer pool.

Every algorithm maximizes an objective over the unit box [0, 1]^dim under a
hard evaluation budget.  The budget object wraps the objective: it counts
calls, tracks the best point seen, records an improvement trace, notifies
an optional per-evaluation observer and aborts the algorithm by raising
once the allowance is spent.  This makes the evaluation count exact by
construction, independent of each algorithm's loop structure.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

__all__ = [
    "OptimizerKind",
    "OPTIMIZER_POOL",
    "OptimizerBudget",
    "OptimizeResult",
    "BudgetTooSmallError",
    "BudgetExhausted",
    "EvaluationBudget",
    "Callback",
]


class OptimizerKind(Enum):
    PSO = "PSO"
    DE = "DE"
    GA = "GA"
    ILSHADE = "ILSHADE"
    LSHADE = "LSHADE"
    JDE = "JDE"


# Fixed pool order used by the pipeline genotype.
OPTIMIZER_POOL: tuple[OptimizerKind, ...] = tuple(OptimizerKind)


class BudgetTooSmallError(ValueError):
    """The evaluation allowance cannot even cover initialization."""


@dataclass(frozen=True)
class OptimizerBudget:
    """Population size, evaluation allowance and RNG seed of one run."""

    np: int
    maxfes: int
    seed: int

    def __post_init__(self):
        if self.np < 4:
            raise ValueError(f"population size must be >= 4, got {self.np}")
        if self.maxfes < self.np:
            raise BudgetTooSmallError(
                f"maxfes ({self.maxfes}) must be >= population size ({self.np})"
            )


@dataclass
class OptimizeResult:
    best_x: np.ndarray
    best_f: float
    evaluations_used: int
    trace: list[tuple[int, float]]


class BudgetExhausted(Exception):
    """Internal control-flow signal; never escapes ``optimize``."""


Callback = Callable[[int, np.ndarray, float], None]


class EvaluationBudget:
    """Objective wrapper enforcing the evaluation allowance.

    Attributes ``used`` and ``maxfes`` are readable by algorithms that
    schedule their behaviour over the budget (population size reduction,
    parameter schedules).
    """

    def __init__(self, objective, maxfes: int, callback: Callback | None = None):
        self._objective = objective
        self._callback = callback
        self.maxfes = maxfes
        self.used = 0
        self.best_x: np.ndarray | None = None
        self.best_f = -math.inf
        self.trace: list[tuple[int, float]] = []

    @property
    def progress(self) -> float:
        return self.used / self.maxfes

    def __call__(self, x: np.ndarray) -> float:
        if self.used >= self.maxfes:
            raise BudgetExhausted
        f = float(self._objective(x))
        self.used += 1
        if f > self.best_f:
            self.best_f = f
            self.best_x = np.array(x, dtype=float)
            self.trace.append((self.used, f))
        if self._callback is not None:
            self._callback(self.used, x, f)
        return f
