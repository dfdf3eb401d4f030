"""Pool of six population-based maximizers behind a single entry point.

The same interface drives both layers of the system: pipeline search on the
outside and rule mining on the inside.  All algorithms maximize over
[0, 1]^dim, clamp candidates to the box, respect the evaluation allowance
exactly and are bit-reproducible given the budget's seed.
"""

import numpy as np

from .core import (
    OPTIMIZER_POOL,
    BudgetExhausted,
    BudgetTooSmallError,
    Callback,
    EvaluationBudget,
    OptimizeResult,
    OptimizerBudget,
    OptimizerKind,
)
from .de import DE_DEFAULTS, JDE_DEFAULTS, run_de, run_jde
from .ga import DEFAULTS as GA_DEFAULTS
from .ga import run_ga
from .pso import DEFAULTS as PSO_DEFAULTS
from .pso import run_pso
from .shade import DEFAULTS as SHADE_DEFAULTS
from .shade import run_ilshade, run_lshade

__all__ = [
    "OptimizerKind",
    "OPTIMIZER_POOL",
    "OptimizerBudget",
    "OptimizeResult",
    "BudgetTooSmallError",
    "optimize",
    "optimizer_defaults",
]

_RUNNERS = {
    OptimizerKind.PSO: run_pso,
    OptimizerKind.DE: run_de,
    OptimizerKind.GA: run_ga,
    OptimizerKind.ILSHADE: run_ilshade,
    OptimizerKind.LSHADE: run_lshade,
    OptimizerKind.JDE: run_jde,
}


def optimize(
    kind: OptimizerKind,
    objective,
    dim: int,
    budget: OptimizerBudget,
    callback: Callback | None = None,
    params: dict | None = None,
) -> OptimizeResult:
    """Maximize ``objective`` over [0, 1]^dim with the chosen algorithm.

    The observer, when given, is invoked as ``callback(index, x, f)`` after
    every single evaluation (1-based index); ``x`` may alias optimizer
    state, so copy it if it must outlive the call.  Exactly ``maxfes``
    evaluations are performed.  The trace lists (evaluation index, best
    fitness) at each strict improvement.  ``params`` overrides the chosen
    algorithm's tunables (e.g. ``scale``/``crossover`` for DE, ``inertia``
    for PSO); unknown names raise TypeError.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    tracker = EvaluationBudget(objective, budget.maxfes, callback)
    rng = np.random.default_rng(budget.seed)
    try:
        _RUNNERS[kind](tracker, dim, budget.np, rng, **(params or {}))
    except BudgetExhausted:
        pass
    assert tracker.best_x is not None
    return OptimizeResult(
        best_x=tracker.best_x,
        best_f=tracker.best_f,
        evaluations_used=tracker.used,
        trace=list(tracker.trace),
    )


def optimizer_defaults() -> dict:
    """Algorithm parameter defaults, for report provenance."""
    return {
        "PSO": dict(PSO_DEFAULTS),
        "DE": dict(DE_DEFAULTS),
        "GA": dict(GA_DEFAULTS),
        "JDE": dict(JDE_DEFAULTS),
        "LSHADE/ILSHADE": dict(SHADE_DEFAULTS),
    }
