"""Success-history adaptive DE with linear population size reduction.

Two variants share this implementation:

* the base variant keeps a 6-slot success history initialised at 0.5,
  current-to-pbest/1 mutation with an external archive (rate 2.6), p = 0.11
  and a population that shrinks linearly from the configured size to 4;
* the improved variant initialises the history at 0.8, pins the last slot
  to 0.9, softens memory updates by averaging them with the previous value,
  grows p linearly from 0.1 to 0.25 over the budget, and caps F/CR early in
  the run (F <= 0.7/0.8/0.9 and CR >= 0.5/0.25 over the first quarters).
"""

import math

import numpy as np

from .core import EvaluationBudget

DEFAULTS = {
    "history": 6,
    "archive_rate": 2.6,
    "p_best": 0.11,
    "min_pop": 4,
    "memory_init": 0.5,
    "improved_memory_init": 0.8,
    "improved_terminal_slot": 0.9,
    "improved_p_low": 0.1,
    "improved_p_high": 0.25,
}


def _cauchy(rng, loc: float, scale: float = 0.1) -> float:
    """One Cauchy draw, resampled while non-positive and capped at 1."""
    value = 0.0
    while value <= 0.0:
        value = loc + scale * math.tan(math.pi * (rng.random() - 0.5))
    return min(value, 1.0)


def _weighted_lehmer(weights: np.ndarray, values: np.ndarray) -> float:
    return float((weights * values**2).sum() / (weights * values).sum())


def run_lshade(evaluate, dim, pop, rng) -> None:
    _shade(evaluate, dim, pop, rng, improved=False)


def run_ilshade(evaluate, dim, pop, rng) -> None:
    _shade(evaluate, dim, pop, rng, improved=True)


def _shade(
    evaluate: EvaluationBudget,
    dim: int,
    pop: int,
    rng: np.random.Generator,
    improved: bool,
) -> None:
    cfg = DEFAULTS
    history = cfg["history"]
    init = cfg["improved_memory_init"] if improved else cfg["memory_init"]
    m_f = np.full(history, init)
    m_cr = np.full(history, init)
    if improved:
        m_f[-1] = cfg["improved_terminal_slot"]
        m_cr[-1] = cfg["improved_terminal_slot"]
    cursor = 0
    writable = history - 1 if improved else history

    pop_init = pop
    x = rng.random((pop, dim))
    fx = np.array([evaluate(xi) for xi in x])
    archive: list[np.ndarray] = []

    while True:
        npop = len(x)
        progress = evaluate.progress
        if improved:
            p = cfg["improved_p_low"] + progress * (
                cfg["improved_p_high"] - cfg["improved_p_low"]
            )
        else:
            p = cfg["p_best"]
        n_best = max(2, round(p * npop))
        order = np.argsort(-fx, kind="stable")

        s_f: list[float] = []
        s_cr: list[float] = []
        deltas: list[float] = []
        for i in range(npop):
            slot = int(rng.integers(history))
            if np.isnan(m_cr[slot]):
                cr = 0.0
            else:
                cr = float(np.clip(rng.normal(m_cr[slot], 0.1), 0.0, 1.0))
            f_i = _cauchy(rng, m_f[slot])
            if improved:
                if progress < 0.25:
                    cr = max(cr, 0.5)
                    f_i = min(f_i, 0.7)
                elif progress < 0.5:
                    cr = max(cr, 0.25)
                    f_i = min(f_i, 0.8)
                elif progress < 0.75:
                    f_i = min(f_i, 0.9)

            pbest = x[order[int(rng.integers(n_best))]]
            r1 = i
            while r1 == i:
                r1 = int(rng.integers(npop))
            pool = npop + len(archive)
            r2 = i
            while r2 == i or r2 == r1:
                r2 = int(rng.integers(pool))
            other = x[r2] if r2 < npop else archive[r2 - npop]

            mutant = np.clip(
                x[i] + f_i * (pbest - x[i]) + f_i * (x[r1] - other), 0.0, 1.0
            )
            mask = rng.random(dim) <= cr
            mask[rng.integers(dim)] = True
            trial = np.where(mask, mutant, x[i])
            f = evaluate(trial)
            if f >= fx[i]:
                if f > fx[i]:
                    archive.append(x[i].copy())
                    s_f.append(f_i)
                    s_cr.append(cr)
                    deltas.append(f - fx[i])
                x[i] = trial
                fx[i] = f

        if s_f:
            w = np.asarray(deltas)
            w = w / w.sum()
            lehmer_f = _weighted_lehmer(w, np.asarray(s_f))
            m_f[cursor] = (m_f[cursor] + lehmer_f) / 2.0 if improved else lehmer_f
            scr = np.asarray(s_cr)
            if np.isnan(m_cr[cursor]) or scr.max() <= 0.0:
                m_cr[cursor] = math.nan
            else:
                lehmer_cr = _weighted_lehmer(w, scr)
                m_cr[cursor] = (
                    (m_cr[cursor] + lehmer_cr) / 2.0 if improved else lehmer_cr
                )
            cursor = (cursor + 1) % writable

        # Linear population size reduction, keeping the best individuals.
        target = round(pop_init + (cfg["min_pop"] - pop_init) * evaluate.progress)
        target = max(cfg["min_pop"], min(pop_init, target))
        if target < npop:
            keep = np.sort(np.argsort(-fx, kind="stable")[:target])
            x = x[keep]
            fx = fx[keep]
        capacity = max(1, round(cfg["archive_rate"] * len(x)))
        while len(archive) > capacity:
            archive.pop(int(rng.integers(len(archive))))
