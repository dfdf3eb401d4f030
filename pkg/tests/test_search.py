import numpy as np
import pytest

from autonarm.metrics import MetricKind
from autonarm.optimizers import OptimizerKind
from autonarm.pipeline import SearchConfig, evaluate_pipeline
from autonarm.report import experiment_payload
from autonarm.search import (
    AllDiscardedError,
    OuterConfig,
    run_experiment,
    search,
)
from autonarm.seeding import derive_seed

from .conftest import numeric_db


def tiny_cfg(**kwargs):
    kwargs.setdefault("np_range", (8, 10))
    kwargs.setdefault("maxfes_range", (60, 120))
    return SearchConfig(**kwargs)


def tiny_outer(**kwargs):
    kwargs.setdefault("outer_kind", OptimizerKind.DE)
    kwargs.setdefault("outer_np", 6)
    kwargs.setdefault("outer_maxfes", 18)
    kwargs.setdefault("runs", 2)
    kwargs.setdefault("base_seed", 11)
    return OuterConfig(**kwargs)


def test_singleton_metric_pool(toy_db):
    cfg = tiny_cfg(metric_pool=(MetricKind.SUPPORT,))
    report = search(toy_db, cfg, tiny_outer(), run_index=0)
    assert report.best_spec.metrics == (MetricKind.SUPPORT,)


def test_initialization_only_budget_returns_best_initial(toy_db):
    cfg = tiny_cfg()
    outer = tiny_outer(outer_np=6, outer_maxfes=6)
    report = search(toy_db, cfg, outer, run_index=0)

    # replicate the optimizer's initial population and its evaluation seeds
    run_seed = derive_seed(outer.base_seed, "run", 0)
    rng = np.random.default_rng(derive_seed(run_seed, "outer"))
    initial = rng.random((outer.outer_np, cfg.dimension))
    fitnesses = [
        evaluate_pipeline(g, toy_db, cfg, derive_seed(run_seed, "eval", i)).fitness
        for i, g in enumerate(initial)
    ]
    assert report.best_fitness == max(fitnesses)


def test_trace_monotone_and_consistent(toy_db):
    for seed in range(4):
        report = search(toy_db, tiny_cfg(), tiny_outer(base_seed=seed), 0)
        fits = [f for _, f in report.fitness_trace]
        assert fits == sorted(fits)
        assert report.best_fitness == fits[-1]
        assert report.rule_count == len(report.rules)
        assert 0.0 <= report.best_fitness <= 1.0


def test_search_deterministic(toy_db):
    a = search(toy_db, tiny_cfg(), tiny_outer(), 0)
    b = search(toy_db, tiny_cfg(), tiny_outer(), 0)
    assert a.best_fitness == b.best_fitness
    assert np.array_equal(a.best_genotype, b.best_genotype)
    assert a.fitness_trace == b.fitness_trace
    assert a.rules == b.rules
    c = search(toy_db, tiny_cfg(), tiny_outer(), 1)
    assert a.seeds["run"] != c.seeds["run"]


def test_all_discarded():
    lone = numeric_db(a=[5.0], b=[3.0])
    cfg = tiny_cfg(metric_pool=(MetricKind.AMPLITUDE,))
    with pytest.raises(AllDiscardedError):
        search(lone, cfg, tiny_outer(outer_np=4, outer_maxfes=8), 0)


def test_search_beats_random_baseline(toy_db):
    # paired comparison against equal-budget random genotype sampling
    cfg = tiny_cfg()
    search_best = []
    random_best = []
    for seed in range(10):
        outer = OuterConfig(
            outer_kind=OptimizerKind.DE,
            outer_np=10,
            outer_maxfes=60,
            runs=1,
            base_seed=seed,
        )
        search_best.append(search(toy_db, cfg, outer, 0).best_fitness)

        rng = np.random.default_rng(derive_seed(seed, "baseline"))
        best = -np.inf
        for i in range(60):
            g = rng.random(cfg.dimension)
            fit = evaluate_pipeline(
                g, toy_db, cfg, derive_seed(seed, "baseline-eval", i)
            ).fitness
            best = max(best, fit)
        random_best.append(best)
    assert np.median(search_best) >= np.median(random_best)


def test_aggregate_single_run(toy_db):
    cfg = tiny_cfg()
    agg = run_experiment(toy_db, cfg, tiny_outer(runs=1))
    run = agg.runs[0]
    assert agg.fitness_mean == run.best_fitness
    assert agg.fitness_std == 0.0
    assert agg.rule_count_mean == run.rule_count
    assert agg.np_mean == run.best_spec.np
    assert sum(agg.preprocessing_combinations.values()) == 1


def test_aggregate_statistics(toy_db):
    cfg = tiny_cfg()
    agg = run_experiment(toy_db, cfg, tiny_outer(runs=3))
    assert len(agg.runs) == 3
    assert sum(agg.algorithm_frequency.values()) == pytest.approx(1.0)
    assert sum(agg.preprocessing_combinations.values()) == 3
    for freq in agg.preprocessing_frequency.values():
        assert 0.0 <= freq <= 1.0
    for name, summary in agg.metric_weights.items():
        assert summary.used_in <= 3
        if summary.used_in:
            assert summary.mean == 1.0  # no weight adaptation
            assert summary.std == 0.0
        else:
            assert summary.mean is None


def test_aggregate_adaptive_weights_in_range(toy_db):
    cfg = tiny_cfg(weight_adaptation=True)
    agg = run_experiment(toy_db, cfg, tiny_outer(runs=3))
    for summary in agg.metric_weights.values():
        if summary.used_in:
            assert 1e-6 <= summary.mean <= 1.0


def test_parallel_equals_sequential(toy_db):
    cfg = tiny_cfg()
    outer = tiny_outer(runs=2)
    sequential = run_experiment(toy_db, cfg, outer, jobs=1)
    parallel = run_experiment(toy_db, cfg, outer, jobs=2)
    assert experiment_payload(sequential) == experiment_payload(parallel)


def test_single_method_frequencies_sum_to_one(toy_db):
    cfg = tiny_cfg(max_preprocess=1)
    agg = run_experiment(toy_db, cfg, tiny_outer(runs=4))
    total = sum(agg.preprocessing_frequency.values())
    assert total == pytest.approx(1.0)


def test_outer_config_validation():
    with pytest.raises(ValueError):
        OuterConfig(outer_np=2)
    with pytest.raises(ValueError):
        OuterConfig(outer_np=10, outer_maxfes=5)
    with pytest.raises(ValueError):
        OuterConfig(runs=0)
