"""Differential evolution: classic rand/1/bin and the self-adaptive jDE."""

import numpy as np

from .core import EvaluationBudget

DE_DEFAULTS = {"scale": 0.5, "crossover": 0.9}
JDE_DEFAULTS = {
    "tau_f": 0.1,
    "tau_cr": 0.1,
    "f_low": 0.1,
    "f_high": 1.0,
    "f_init": 0.5,
    "cr_init": 0.9,
}


def _distinct(rng: np.random.Generator, pop: int, exclude: int, count: int):
    """`count` mutually distinct indices, none equal to `exclude`."""
    idx = rng.choice(pop - 1, size=count, replace=False)
    return np.where(idx >= exclude, idx + 1, idx)


def _binomial(rng, target: np.ndarray, mutant: np.ndarray, cr: float) -> np.ndarray:
    mask = rng.random(len(target)) <= cr
    mask[rng.integers(len(target))] = True
    return np.where(mask, mutant, target)


def run_de(
    evaluate: EvaluationBudget,
    dim: int,
    pop: int,
    rng: np.random.Generator,
    scale: float = DE_DEFAULTS["scale"],
    crossover: float = DE_DEFAULTS["crossover"],
) -> None:
    """Synchronous-population DE/rand/1/bin with greedy (>=) replacement."""
    x = rng.random((pop, dim))
    fx = np.array([evaluate(xi) for xi in x])
    while True:
        for i in range(pop):
            r1, r2, r3 = _distinct(rng, pop, i, 3)
            mutant = np.clip(x[r1] + scale * (x[r2] - x[r3]), 0.0, 1.0)
            trial = _binomial(rng, x[i], mutant, crossover)
            f = evaluate(trial)
            if f >= fx[i]:
                x[i] = trial
                fx[i] = f


def run_jde(
    evaluate: EvaluationBudget,
    dim: int,
    pop: int,
    rng: np.random.Generator,
) -> None:
    """jDE: rand/1/bin with per-individual self-adaptation of F and CR.

    With probability tau each generation an individual redraws its F
    uniformly from [0.1, 1.0] or its CR from [0, 1]; the redrawn values
    survive only if the trial they produced replaces the parent.
    """
    p = JDE_DEFAULTS
    x = rng.random((pop, dim))
    fx = np.array([evaluate(xi) for xi in x])
    f_par = np.full(pop, p["f_init"])
    cr_par = np.full(pop, p["cr_init"])
    while True:
        for i in range(pop):
            draw = rng.random(4)
            f_i = (
                p["f_low"] + (p["f_high"] - p["f_low"]) * draw[1]
                if draw[0] < p["tau_f"]
                else f_par[i]
            )
            cr_i = draw[3] if draw[2] < p["tau_cr"] else cr_par[i]
            r1, r2, r3 = _distinct(rng, pop, i, 3)
            mutant = np.clip(x[r1] + f_i * (x[r2] - x[r3]), 0.0, 1.0)
            trial = _binomial(rng, x[i], mutant, cr_i)
            f = evaluate(trial)
            if f >= fx[i]:
                x[i] = trial
                fx[i] = f
                f_par[i] = f_i
                cr_par[i] = cr_i
