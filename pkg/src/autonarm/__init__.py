"""autonarm: automated numerical association rule mining pipelines.

The package searches the space of complete mining pipelines (inner
algorithm, its population size and evaluation budget, a preprocessing
chain, a metric subset and metric weights) with a population-based
optimizer, scoring every candidate pipeline by actually running the rule
miner it encodes.
"""

from .dataset import (
    Attribute,
    AttributeKind,
    EmptyDatasetError,
    MissingValueError,
    RaggedRowsError,
    TransactionDatabase,
    attribute_domain,
    drop_columns,
    load_csv,
    save_csv,
)
from .metrics import (
    METRIC_POOL,
    MetricKind,
    evaluate_all,
    evaluate_metric,
    inner_fitness,
)
from .mining import ArchiveEntry, RuleArchive, mine
from .optimizers import (
    OPTIMIZER_POOL,
    BudgetTooSmallError,
    OptimizeResult,
    OptimizerBudget,
    OptimizerKind,
    optimize,
)
from .pipeline import (
    PipelineResult,
    PipelineSpec,
    SearchConfig,
    decode_pipeline,
    evaluate_pipeline,
    map_hyperparam,
    map_scalar_to_pool,
    surrogate_fitness,
)
from .preprocess import (
    PREPROCESS_POOL,
    PreprocessKind,
    PreprocessParams,
    apply_chain,
    kmeans_discretize,
    min_max,
    remove_highly_correlated,
    squash,
    z_score,
)
from .report import (
    ComparisonResult,
    LengthMismatchError,
    TooFewPairsError,
    emit_report,
    wilcoxon_signed_rank,
)
from .rules import (
    CategoryCondition,
    Condition,
    IntervalCondition,
    Rule,
    decode_rule,
    format_rule,
    rule_dimension,
    satisfies,
)
from .search import (
    AggregateReport,
    AllDiscardedError,
    OuterConfig,
    RunReport,
    run_experiment,
    search,
)
from .seeding import derive_seed

__version__ = "0.1.0"
