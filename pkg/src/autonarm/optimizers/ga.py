"""Generational genetic algorithm with tournament selection."""

import numpy as np

from .core import EvaluationBudget

DEFAULTS = {
    "crossover_rate": 0.8,
    "mutation_sigma": 0.1,
    "tournament": 2,
    "elites": 1,
}


def _tournament(rng, fx: np.ndarray, size: int) -> int:
    contestants = rng.integers(len(fx), size=size)
    return int(contestants[np.argmax(fx[contestants])])


def run_ga(
    evaluate: EvaluationBudget,
    dim: int,
    pop: int,
    rng: np.random.Generator,
    crossover_rate: float = DEFAULTS["crossover_rate"],
    mutation_sigma: float = DEFAULTS["mutation_sigma"],
) -> None:
    """GA with tournament-2 parents, uniform crossover and Gaussian mutation.

    Mutation hits each gene with probability 1/dim.  The single best
    individual carries over unchanged each generation (its cached fitness
    is reused, so elitism costs no evaluations).
    """
    x = rng.random((pop, dim))
    fx = np.array([evaluate(xi) for xi in x])
    gene_rate = 1.0 / dim
    while True:
        elite = int(np.argmax(fx))
        next_x = [x[elite].copy()]
        next_f = [fx[elite]]
        while len(next_x) < pop:
            p1 = _tournament(rng, fx, DEFAULTS["tournament"])
            p2 = _tournament(rng, fx, DEFAULTS["tournament"])
            if rng.random() < crossover_rate:
                mask = rng.random(dim) < 0.5
                child = np.where(mask, x[p1], x[p2])
            else:
                child = x[p1].copy()
            noise = rng.normal(0.0, mutation_sigma, dim)
            hit = rng.random(dim) < gene_rate
            child = np.clip(np.where(hit, child + noise, child), 0.0, 1.0)
            next_f.append(evaluate(child))
            next_x.append(child)
        x = np.asarray(next_x)
        fx = np.asarray(next_f)
