"""Outer pipeline search and the multi-run experiment protocol.

One search drives a population-based optimizer over pipeline genotypes,
scoring each candidate by actually running the mining pipeline it encodes.
The globally best pipeline is tracked across every evaluation (ties go to
the newer candidate) and re-materialized once at the end with its recorded
seed, so the reported rules always match the reported fitness.

An experiment is a set of independent, individually seeded searches whose
best pipelines are aggregated into component-selection frequencies,
hyper-parameter statistics and metric-weight usage summaries.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import TransactionDatabase
from .mining import RuleArchive
from .optimizers import OptimizerBudget, OptimizerKind, optimize
from .pipeline import PipelineSpec, SearchConfig, evaluate_pipeline
from .rules import rule_record
from .seeding import derive_seed

__all__ = [
    "OuterConfig",
    "RunReport",
    "WeightSummary",
    "AggregateReport",
    "AllDiscardedError",
    "search",
    "run_experiment",
    "aggregate_runs",
]


class AllDiscardedError(RuntimeError):
    """Every evaluated pipeline failed to decode or produced no rules."""


@dataclass(frozen=True)
class OuterConfig:
    """Configuration of the outer searcher and the experiment protocol."""

    outer_kind: OptimizerKind = OptimizerKind.PSO
    outer_np: int = 30
    outer_maxfes: int = 1000
    runs: int = 30
    base_seed: int = 1

    def __post_init__(self):
        if self.outer_np < 4:
            raise ValueError("outer_np must be >= 4")
        if self.outer_maxfes < self.outer_np:
            raise ValueError("outer_maxfes must be >= outer_np")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass
class RunReport:
    """Outcome of one independent search."""

    run_index: int
    best_genotype: np.ndarray
    best_spec: PipelineSpec
    best_fitness: float
    rule_count: int
    fitness_trace: list[tuple[int, float]]
    seeds: dict
    wall_time: float
    # Structured records of the best pipeline's mined rules.
    rules: list[dict]


def _archive_records(archive: RuleArchive, db: TransactionDatabase) -> list[dict]:
    return [
        {
            **rule_record(entry.rule, db),
            "metrics": {k.value: v for k, v in entry.metrics.items()},
            "fitness": entry.fitness,
        }
        for entry in archive.entries
    ]


def search(
    db: TransactionDatabase,
    cfg: SearchConfig,
    outer: OuterConfig,
    run_index: int = 0,
) -> RunReport:
    """Execute one outer search run.

    Pipeline-evaluation seeds derive from (base seed, run index, evaluation
    index), so a run is reproducible bit-exactly and runs are mutually
    independent.
    """
    started = time.perf_counter()
    run_seed = derive_seed(outer.base_seed, "run", run_index)
    outer_seed = derive_seed(run_seed, "outer")

    state = {"evals": 0, "fitness": -np.inf, "genotype": None, "index": -1}
    trace: list[tuple[int, float]] = []

    def objective(genotype) -> float:
        index = state["evals"]
        state["evals"] += 1
        result = evaluate_pipeline(
            genotype, db, cfg, derive_seed(run_seed, "eval", index)
        )
        if result.fitness >= state["fitness"]:
            state["genotype"] = np.array(genotype, dtype=float)
            state["index"] = index
        if result.fitness > state["fitness"]:
            trace.append((index + 1, result.fitness))
        state["fitness"] = max(state["fitness"], result.fitness)
        return result.fitness

    optimize(
        outer.outer_kind,
        objective,
        cfg.dimension,
        OptimizerBudget(outer.outer_np, outer.outer_maxfes, outer_seed),
    )

    best_eval_seed = derive_seed(run_seed, "eval", state["index"])
    best = evaluate_pipeline(state["genotype"], db, cfg, best_eval_seed)
    if best.discarded:
        raise AllDiscardedError(
            f"run {run_index}: every evaluated pipeline was discarded"
        )
    assert best.fitness == state["fitness"]

    return RunReport(
        run_index=run_index,
        best_genotype=state["genotype"],
        best_spec=best.spec,
        best_fitness=best.fitness,
        rule_count=len(best.archive),
        fitness_trace=trace,
        seeds={
            "base": outer.base_seed,
            "run_index": run_index,
            "run": run_seed,
            "outer": outer_seed,
            "best_eval_index": state["index"],
            "best_eval": best_eval_seed,
        },
        wall_time=time.perf_counter() - started,
        rules=_archive_records(best.archive, best.prepared_db),
    )


@dataclass
class WeightSummary:
    """Weight statistics of one metric over the runs that selected it."""

    used_in: int
    mean: float | None
    std: float | None


@dataclass
class AggregateReport:
    """Statistics over the best pipelines of an experiment's runs."""

    runs: list[RunReport]
    fitness_mean: float
    fitness_std: float
    rule_count_mean: float
    rule_count_std: float
    np_mean: float
    np_std: float
    maxfes_mean: float
    maxfes_std: float
    algorithm_frequency: dict[str, float]
    preprocessing_frequency: dict[str, float]
    preprocessing_combinations: dict[str, int]
    metric_weights: dict[str, WeightSummary]


def _mean_std(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def aggregate_runs(cfg: SearchConfig, runs: list[RunReport]) -> AggregateReport:
    n = len(runs)
    specs = [r.best_spec for r in runs]

    fitness_mean, fitness_std = _mean_std([r.best_fitness for r in runs])
    rules_mean, rules_std = _mean_std([r.rule_count for r in runs])
    np_mean, np_std = _mean_std([s.np for s in specs])
    fes_mean, fes_std = _mean_std([s.maxfes for s in specs])

    algorithm_frequency = {
        kind.value: sum(s.algorithm is kind for s in specs) / n
        for kind in cfg.algorithm_pool
    }
    preprocessing_frequency = {
        kind.value: sum(kind in s.preprocessing for s in specs) / n
        for kind in cfg.preprocess_pool
    }
    preprocessing_frequency["none"] = sum(not s.preprocessing for s in specs) / n

    combinations: dict[str, int] = {}
    for s in specs:
        label = "+".join(p.value for p in s.preprocessing) or "none"
        combinations[label] = combinations.get(label, 0) + 1

    metric_weights: dict[str, WeightSummary] = {}
    for kind in cfg.metric_pool:
        values = [s.weights[kind] for s in specs if kind in s.metrics]
        if values:
            mean, std = _mean_std(values)
            metric_weights[kind.value] = WeightSummary(len(values), mean, std)
        else:
            metric_weights[kind.value] = WeightSummary(0, None, None)

    return AggregateReport(
        runs=runs,
        fitness_mean=fitness_mean,
        fitness_std=fitness_std,
        rule_count_mean=rules_mean,
        rule_count_std=rules_std,
        np_mean=np_mean,
        np_std=np_std,
        maxfes_mean=fes_mean,
        maxfes_std=fes_std,
        algorithm_frequency=algorithm_frequency,
        preprocessing_frequency=preprocessing_frequency,
        preprocessing_combinations=combinations,
        metric_weights=metric_weights,
    )


def _search_job(args) -> RunReport:
    return search(*args)


def run_experiment(
    db: TransactionDatabase,
    cfg: SearchConfig,
    outer: OuterConfig,
    jobs: int = 1,
) -> AggregateReport:
    """Run ``outer.runs`` independent searches and aggregate their bests.

    With ``jobs`` > 1 the runs execute in separate processes; seeding makes
    the outcome identical to a sequential execution.
    """
    tasks = [(db, cfg, outer, i) for i in range(outer.runs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_search_job, tasks))
    else:
        reports = [search(*task) for task in tasks]
    return aggregate_runs(cfg, reports)
