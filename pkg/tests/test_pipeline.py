import numpy as np
import pytest

from autonarm.metrics import MetricKind
from autonarm.mining import ArchiveEntry, RuleArchive
from autonarm.optimizers import OptimizerKind
from autonarm.pipeline import (
    SearchConfig,
    decode_pipeline,
    evaluate_pipeline,
    map_hyperparam,
    map_scalar_to_pool,
    surrogate_fitness,
)
from autonarm.preprocess import PreprocessKind
from autonarm.rules import CategoryCondition, IntervalCondition, Rule


def genotype(cfg, alg=0.0, np_gene=0.0, fes=0.0, p=None, z=None, w=None):
    p = [0.0] * len(cfg.preprocess_pool) if p is None else p
    z = [1.0] * len(cfg.metric_pool) if z is None else z
    w = [1.0] * len(cfg.metric_pool) if w is None else w
    return np.array([alg, np_gene, fes, *p, *z, *w])


# ---------------------------------------------------------------------------
# scalar mappings


def test_pool_mapping_examples():
    assert map_scalar_to_pool(0.0, 6) == 0
    assert map_scalar_to_pool(1.0, 6) == 5
    assert map_scalar_to_pool(0.34, 6) == 2


def test_pool_mapping_uniform_coverage():
    rng = np.random.default_rng(1)
    draws = rng.random(100_000)
    indices = np.minimum((draws * 6).astype(int), 5)
    freqs = np.bincount(indices, minlength=6) / len(draws)
    assert np.all(np.abs(freqs - 1 / 6) < 0.01)
    assert [map_scalar_to_pool(float(d), 6) for d in draws[:50]] == list(
        indices[:50]
    )


def test_hyperparam_endpoints():
    assert map_hyperparam(0.0, 10, 30) == 10
    assert map_hyperparam(1.0, 10, 30) == 30
    assert map_hyperparam(0.0, 2000, 10000) == 2000
    assert map_hyperparam(1.0, 2000, 10000) == 10000
    assert map_hyperparam(0.5, 10, 30) == 20


def test_hyperparam_half_up_rounding():
    # 10 + 0.025 * 20 = 10.5 rounds up
    assert map_hyperparam(0.025, 10, 30) == 11
    assert map_hyperparam(0.5, 0, 1) == 1


# ---------------------------------------------------------------------------
# decoding


def test_dimension_matches_pools():
    cfg = SearchConfig()
    assert cfg.dimension == 1 + 2 + 5 + 2 * 6
    small = SearchConfig(metric_pool=(MetricKind.SUPPORT,))
    assert small.dimension == 1 + 2 + 5 + 2


def test_decode_failure_when_no_metric_selected():
    cfg = SearchConfig()
    g = genotype(cfg, z=[0.5] * 6)
    assert decode_pipeline(g, cfg) is None


def test_decode_preprocessing_gate():
    cfg = SearchConfig()
    g = genotype(cfg, p=[0.4, 0.0, 0.5, 0.2, 0.1])
    spec = decode_pipeline(g, cfg)
    assert spec.preprocessing == ()
    g = genotype(cfg, p=[0.6, 0.0, 0.0, 0.9, 0.0])
    spec = decode_pipeline(g, cfg)
    assert spec.preprocessing == (PreprocessKind.MM, PreprocessKind.RHC)


def test_decode_algorithm_and_hyperparams():
    cfg = SearchConfig()
    spec = decode_pipeline(genotype(cfg, alg=0.34, np_gene=0.5, fes=1.0), cfg)
    assert spec.algorithm is OptimizerKind.GA
    assert spec.np == 20
    assert spec.maxfes == 10000


def test_decode_weights_fixed_without_adaptation():
    cfg = SearchConfig(weight_adaptation=False)
    spec = decode_pipeline(genotype(cfg, w=[0.3] * 6), cfg)
    assert all(w == 1.0 for w in spec.weights.values())


def test_decode_weights_adaptive_with_floor():
    cfg = SearchConfig(weight_adaptation=True)
    w = [0.0, 0.25, 0.5, 0.75, 1.0, 0.1]
    spec = decode_pipeline(genotype(cfg, w=w), cfg)
    assert spec.weights[MetricKind.SUPPORT] == 1e-6
    assert spec.weights[MetricKind.CONFIDENCE] == 0.25
    assert spec.weights[MetricKind.COMPREHENSIBILITY] == 0.1


def test_decode_max_preprocess_cap():
    cfg = SearchConfig(max_preprocess=1)
    g = genotype(cfg, p=[0.6, 0.9, 0.0, 0.7, 0.0])
    spec = decode_pipeline(g, cfg)
    assert spec.preprocessing == (PreprocessKind.ZS,)  # highest gene wins
    g = genotype(cfg, p=[0.8, 0.8, 0.0, 0.0, 0.0])
    spec = decode_pipeline(g, cfg)
    assert spec.preprocessing == (PreprocessKind.MM,)  # tie: earlier entry


def test_decode_dimension_mismatch():
    cfg = SearchConfig()
    with pytest.raises(ValueError):
        decode_pipeline(np.zeros(cfg.dimension - 1), cfg)


def test_decoded_specs_always_valid():
    cfg = SearchConfig(weight_adaptation=True, max_preprocess=2)
    rng = np.random.default_rng(77)
    for _ in range(300):
        spec = decode_pipeline(rng.random(cfg.dimension), cfg)
        if spec is None:
            continue
        assert 10 <= spec.np <= 30
        assert 2000 <= spec.maxfes <= 10000
        assert len(spec.preprocessing) <= 2
        assert spec.metrics
        assert set(spec.weights) == set(spec.metrics)
        assert all(1e-6 <= w <= 1.0 for w in spec.weights.values())


def test_gate_set_level_invariance():
    cfg = SearchConfig()
    rng = np.random.default_rng(13)
    for _ in range(100):
        g = rng.random(cfg.dimension)
        spec = decode_pipeline(g, cfg)
        perturbed = g.copy()
        j = int(rng.integers(len(cfg.preprocess_pool)))
        if perturbed[3 + j] > 0.5:
            perturbed[3 + j] = 0.5 + 0.5 * rng.random()
            other = decode_pipeline(perturbed, cfg)
            if spec is not None:
                assert other.preprocessing == spec.preprocessing


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(np_range=(30, 10))
    with pytest.raises(ValueError):
        SearchConfig(alpha=-1.0)
    with pytest.raises(ValueError):
        SearchConfig(alpha=0.0, beta=0.0)
    with pytest.raises(ValueError):
        SearchConfig(metric_pool=())
    with pytest.raises(ValueError):
        SearchConfig(np_range=(10, 30), maxfes_range=(20, 100))
    SearchConfig(alpha=1.0, beta=0.0)  # single-term blend is allowed


# ---------------------------------------------------------------------------
# pipeline fitness


def synthetic_archive(rng, size):
    entries = []
    for i in range(size):
        s, c = rng.uniform(0.0, 1.0, 2)
        rule = Rule(
            (IntervalCondition(0, 0.0, float(i + 1)),),
            (CategoryCondition(1, "r"),),
        )
        entries.append(
            ArchiveEntry(
                rule,
                {MetricKind.SUPPORT: float(s), MetricKind.CONFIDENCE: float(c)},
                1.0,
            )
        )
    return RuleArchive.from_entries(entries)


def test_surrogate_blend():
    rng = np.random.default_rng(2)
    for _ in range(20):
        archive = synthetic_archive(rng, int(rng.integers(1, 9)))
        expected = (archive.mean_support + archive.mean_confidence) / 2.0
        assert abs(surrogate_fitness(archive, 1.0, 1.0) - expected) < 1e-12
        assert surrogate_fitness(archive, 1.0, 0.0) == archive.mean_support
        assert surrogate_fitness(archive, 0.0, 1.0) == archive.mean_confidence


def test_evaluate_discards_decode_failure(toy_db):
    cfg = SearchConfig()
    result = evaluate_pipeline(genotype(cfg, z=[0.0] * 6), toy_db, cfg, seed=1)
    assert result.discarded is True
    assert result.fitness == -1.0
    assert result.spec is None
    assert len(result.archive) == 0


def tiny_cfg(**kwargs):
    return SearchConfig(np_range=(8, 10), maxfes_range=(100, 200), **kwargs)


def test_evaluate_pipeline_runs_and_reproduces(toy_db):
    cfg = tiny_cfg()
    g = genotype(cfg, alg=0.0, np_gene=0.0, fes=0.0)
    a = evaluate_pipeline(g, toy_db, cfg, seed=9)
    b = evaluate_pipeline(g, toy_db, cfg, seed=9)
    assert not a.discarded
    assert 0.0 <= a.fitness <= 1.0
    assert a.fitness == b.fitness
    assert a.archive.entries == b.archive.entries
    c = evaluate_pipeline(g, toy_db, cfg, seed=10)
    assert c.fitness != a.fitness or c.archive.entries != a.archive.entries


def test_evaluate_alpha_only_equals_mean_support(toy_db):
    cfg = tiny_cfg(alpha=1.0, beta=0.0)
    g = genotype(cfg)
    result = evaluate_pipeline(g, toy_db, cfg, seed=3)
    assert result.fitness == result.archive.mean_support


def test_evaluate_applies_preprocessing(toy_db):
    cfg = tiny_cfg()
    g = genotype(cfg, p=[0.9, 0.0, 0.0, 0.0, 0.0])
    result = evaluate_pipeline(g, toy_db, cfg, seed=4)
    assert result.spec.preprocessing == (PreprocessKind.MM,)
    # rules refer to the min-max rescaled database
    assert result.prepared_db.attributes[0].max == 1.0
