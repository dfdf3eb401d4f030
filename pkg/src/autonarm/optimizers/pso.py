"""Global-best particle swarm optimization on the unit box."""

import numpy as np

from .core import EvaluationBudget

DEFAULTS = {"inertia": 0.7, "cognitive": 2.0, "social": 2.0, "velocity_clamp": 0.5}


def run_pso(
    evaluate: EvaluationBudget,
    dim: int,
    pop: int,
    rng: np.random.Generator,
    inertia: float = DEFAULTS["inertia"],
    cognitive: float = DEFAULTS["cognitive"],
    social: float = DEFAULTS["social"],
    velocity_clamp: float = DEFAULTS["velocity_clamp"],
) -> None:
    """Classic inertia-weight PSO with velocity clamping.

    Personal and global bests are updated immediately after each particle's
    evaluation, so the swarm always chases the most recent best.  Velocities
    start uniform in the clamp range; starting them at zero would freeze the
    whole swarm on a constant fitness plateau.
    """
    x = rng.random((pop, dim))
    v = rng.uniform(-velocity_clamp, velocity_clamp, size=(pop, dim))
    pbest_x = x.copy()
    pbest_f = np.empty(pop)
    for i in range(pop):
        pbest_f[i] = evaluate(x[i])
    g = int(pbest_f.argmax())
    gbest_x = pbest_x[g].copy()
    gbest_f = pbest_f[g]

    while True:
        for i in range(pop):
            r1 = rng.random(dim)
            r2 = rng.random(dim)
            v[i] = (
                inertia * v[i]
                + cognitive * r1 * (pbest_x[i] - x[i])
                + social * r2 * (gbest_x - x[i])
            )
            np.clip(v[i], -velocity_clamp, velocity_clamp, out=v[i])
            x[i] = np.clip(x[i] + v[i], 0.0, 1.0)
            f = evaluate(x[i])
            if f > pbest_f[i]:
                pbest_f[i] = f
                pbest_x[i] = x[i]
                if f > gbest_f:
                    gbest_f = f
                    gbest_x = x[i].copy()
