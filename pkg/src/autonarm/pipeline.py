"""Pipeline encoding, decoding and evaluation.

A pipeline genotype is a vector in [0, 1]^D laid out as

    (algorithm | np, maxfes | p_1..p_P | z_1..z_M | w_1..w_M)

with P the preprocessing pool size and M the metric pool size, so
D = 1 + 2 + P + 2M.  Scalar genes map onto pools by flooring and onto
integer ranges by affine scaling with half-up rounding; the p and z genes
select pool members by the > 0.5 gate.  A genotype whose metric selection
is empty fails to decode, and a decoded pipeline whose mining run produces
no rules is discarded: both score the -1 sentinel.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import TransactionDatabase
from .metrics import METRIC_POOL, MetricKind
from .mining import RuleArchive, mine
from .optimizers import OPTIMIZER_POOL, OptimizerBudget, OptimizerKind
from .preprocess import PREPROCESS_POOL, PreprocessKind, PreprocessParams, apply_chain
from .seeding import derive_seed

__all__ = [
    "SearchConfig",
    "PipelineSpec",
    "PipelineResult",
    "map_scalar_to_pool",
    "map_hyperparam",
    "decode_pipeline",
    "surrogate_fitness",
    "evaluate_pipeline",
]

# Smallest admissible adaptive weight; a zero gene would otherwise break
# the positive-weight requirement of the inner fitness.
WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    """Search space of the pipeline construction problem."""

    algorithm_pool: tuple[OptimizerKind, ...] = OPTIMIZER_POOL
    preprocess_pool: tuple[PreprocessKind, ...] = PREPROCESS_POOL
    metric_pool: tuple[MetricKind, ...] = METRIC_POOL
    np_range: tuple[int, int] = (10, 30)
    maxfes_range: tuple[int, int] = (2000, 10000)
    weight_adaptation: bool = False
    alpha: float = 1.0
    beta: float = 1.0
    max_preprocess: int | None = None
    preprocess_params: PreprocessParams = field(default_factory=PreprocessParams)

    def __post_init__(self):
        if not self.algorithm_pool or not self.metric_pool:
            raise ValueError("algorithm and metric pools must be non-empty")
        if self.np_range[0] > self.np_range[1]:
            raise ValueError("np_range must be ordered")
        if self.maxfes_range[0] > self.maxfes_range[1]:
            raise ValueError("maxfes_range must be ordered")
        if self.np_range[0] < 4:
            raise ValueError("inner population size must be >= 4")
        if self.maxfes_range[0] < self.np_range[1]:
            raise ValueError("maxfes_range must cover the largest np")
        if self.alpha < 0.0 or self.beta < 0.0 or self.alpha + self.beta == 0.0:
            raise ValueError("alpha and beta must be >= 0 with a positive sum")
        if self.max_preprocess is not None and self.max_preprocess < 0:
            raise ValueError("max_preprocess must be >= 0")

    @property
    def dimension(self) -> int:
        return 1 + 2 + len(self.preprocess_pool) + 2 * len(self.metric_pool)


@dataclass(frozen=True)
class PipelineSpec:
    """Decoded pipeline: what one evaluation actually runs."""

    algorithm: OptimizerKind
    np: int
    maxfes: int
    preprocessing: tuple[PreprocessKind, ...]
    metrics: tuple[MetricKind, ...]
    weights: dict[MetricKind, float]

    def to_record(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "np": self.np,
            "maxfes": self.maxfes,
            "preprocessing": [p.value for p in self.preprocessing],
            "metrics": [m.value for m in self.metrics],
            "weights": {m.value: w for m, w in self.weights.items()},
        }


@dataclass
class PipelineResult:
    spec: PipelineSpec | None
    archive: RuleArchive
    fitness: float
    discarded: bool
    # The preprocessed database the archive's rules refer to (None when the
    # genotype failed to decode); needed to print rules whose attribute set
    # was changed by preprocessing.
    prepared_db: TransactionDatabase | None = None


def map_scalar_to_pool(x: float, pool_size: int) -> int:
    """Map a [0, 1] gene onto a pool index: min(floor(x * size), size - 1)."""
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    return min(int(x * pool_size), pool_size - 1)


def map_hyperparam(y: float, lo: int, hi: int) -> int:
    """Map a [0, 1] gene onto [lo, hi] with half-up rounding."""
    if lo > hi:
        raise ValueError("lo must be <= hi")
    return int(math.floor(lo + y * (hi - lo) + 0.5))


def decode_pipeline(
    genotype: np.ndarray, cfg: SearchConfig
) -> PipelineSpec | None:
    """Decode a genotype into a pipeline, or None when no metric is gated in.

    When ``cfg.max_preprocess`` caps the selection, the gated-in methods
    with the highest gene values are kept (ties favour earlier pool
    entries); the cap set to 1 reproduces single-preprocessing pipelines.
    """
    genotype = np.asarray(genotype, dtype=float)
    if genotype.shape != (cfg.dimension,):
        raise ValueError(
            f"expected genotype of length {cfg.dimension}, got {genotype.shape}"
        )
    algorithm = cfg.algorithm_pool[
        map_scalar_to_pool(genotype[0], len(cfg.algorithm_pool))
    ]
    np_size = map_hyperparam(genotype[1], *cfg.np_range)
    maxfes = map_hyperparam(genotype[2], *cfg.maxfes_range)

    p_count = len(cfg.preprocess_pool)
    m_count = len(cfg.metric_pool)
    p_genes = genotype[3 : 3 + p_count]
    z_genes = genotype[3 + p_count : 3 + p_count + m_count]
    w_genes = genotype[3 + p_count + m_count :]

    chosen = [j for j in range(p_count) if p_genes[j] > 0.5]
    if cfg.max_preprocess is not None and len(chosen) > cfg.max_preprocess:
        chosen = sorted(
            sorted(chosen, key=lambda j: (-p_genes[j], j))[: cfg.max_preprocess]
        )
    preprocessing = tuple(cfg.preprocess_pool[j] for j in chosen)

    metrics = tuple(
        cfg.metric_pool[j] for j in range(m_count) if z_genes[j] > 0.5
    )
    if not metrics:
        return None

    weights = {}
    for j, kind in enumerate(cfg.metric_pool):
        if kind not in metrics:
            continue
        if cfg.weight_adaptation:
            weights[kind] = max(float(w_genes[j]), WEIGHT_FLOOR)
        else:
            weights[kind] = 1.0
    return PipelineSpec(algorithm, np_size, maxfes, preprocessing, metrics, weights)


def surrogate_fitness(archive: RuleArchive, alpha: float, beta: float) -> float:
    """Pipeline fitness: (alpha * mean support + beta * mean confidence)
    normalized by alpha + beta."""
    return (alpha * archive.mean_support + beta * archive.mean_confidence) / (
        alpha + beta
    )


def evaluate_pipeline(
    genotype: np.ndarray,
    db: TransactionDatabase,
    cfg: SearchConfig,
    seed: int,
) -> PipelineResult:
    """Decode and actually run one pipeline; reproducible given the seed.

    Decode failures and runs whose archive stays empty are discarded with
    fitness -1; otherwise the fitness is the alpha/beta blend of the
    archive's mean support and confidence, which lies in [0, 1].
    """
    spec = decode_pipeline(genotype, cfg)
    if spec is None:
        return PipelineResult(None, RuleArchive.from_entries([]), -1.0, True)
    prepared = apply_chain(
        db, spec.preprocessing, derive_seed(seed, "prep"), cfg.preprocess_params
    )
    archive = mine(
        prepared,
        spec.algorithm,
        OptimizerBudget(spec.np, spec.maxfes, derive_seed(seed, "mine")),
        spec.metrics,
        spec.weights,
    )
    if not archive.entries:
        return PipelineResult(spec, archive, -1.0, True, prepared)
    return PipelineResult(
        spec,
        archive,
        surrogate_fitness(archive, cfg.alpha, cfg.beta),
        False,
        prepared,
    )
