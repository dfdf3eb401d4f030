"""Dataset preprocessing pool: MM, ZS, DS, RHC and DK.

Five transformations can be chained in front of a mining run:

* MM  - min-max rescaling of numeric attributes to [0, 1],
* ZS  - z-score standardisation (population sigma),
* DS  - data squashing: k-means over rows, one representative per cluster,
* RHC - removal of highly correlated numeric attributes,
* DK  - per-attribute discretisation by 1-D k-means (values -> centroids).

All transformations are pure: they return a new database and never mutate
the input.  Chains are always applied in the fixed pool order above.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .dataset import Attribute, AttributeKind, TransactionDatabase
from .seeding import derive_seed

__all__ = [
    "PreprocessKind",
    "PREPROCESS_POOL",
    "PreprocessParams",
    "min_max",
    "z_score",
    "squash",
    "remove_highly_correlated",
    "kmeans_discretize",
    "apply_chain",
]


class PreprocessKind(Enum):
    MM = "MM"
    ZS = "ZS"
    DS = "DS"
    RHC = "RHC"
    DK = "DK"


# Fixed pool (and chain application) order.
PREPROCESS_POOL: tuple[PreprocessKind, ...] = tuple(PreprocessKind)


@dataclass(frozen=True)
class PreprocessParams:
    """Tunable parameters of the pool methods."""

    squash_ratio: float = 0.5
    correlation_threshold: float = 0.95
    discretize_k: int = 5

    def __post_init__(self):
        if not 0.0 < self.squash_ratio <= 1.0:
            raise ValueError("squash_ratio must be in (0, 1]")
        if not 0.0 < self.correlation_threshold <= 1.0:
            raise ValueError("correlation_threshold must be in (0, 1]")
        if self.discretize_k < 2:
            raise ValueError("discretize_k must be >= 2")


def _replace_numeric(
    db: TransactionDatabase, new_columns: dict[int, np.ndarray]
) -> TransactionDatabase:
    """Rebuild a database with some numeric columns replaced.

    The schema min/max of each replaced column is recomputed from its data.
    """
    attributes = []
    for j, attr in enumerate(db.attributes):
        if j in new_columns:
            col = new_columns[j]
            attributes.append(
                Attribute(
                    attr.name,
                    AttributeKind.NUMERIC,
                    float(col.min()),
                    float(col.max()),
                )
            )
        else:
            attributes.append(attr)
    rows = tuple(
        tuple(
            float(new_columns[j][i]) if j in new_columns else row[j]
            for j in range(db.n_attributes)
        )
        for i, row in enumerate(db.rows)
    )
    return TransactionDatabase(tuple(attributes), rows)


def min_max(db: TransactionDatabase) -> TransactionDatabase:
    """Rescale every numeric attribute to [0, 1]; constants map to 0."""
    updates = {}
    for j, attr in enumerate(db.attributes):
        if not attr.is_numeric:
            continue
        col = db.column(j)
        span = col.max() - col.min()
        if span == 0.0:
            updates[j] = np.zeros_like(col)
        else:
            updates[j] = (col - col.min()) / span
    return _replace_numeric(db, updates) if updates else db


def z_score(db: TransactionDatabase) -> TransactionDatabase:
    """Standardise numeric attributes to mean 0, population sigma 1."""
    updates = {}
    for j, attr in enumerate(db.attributes):
        if not attr.is_numeric:
            continue
        col = db.column(j)
        sigma = col.std()
        if sigma == 0.0:
            updates[j] = np.zeros_like(col)
        else:
            updates[j] = (col - col.mean()) / sigma
    return _replace_numeric(db, updates) if updates else db


def _normalized_features(db: TransactionDatabase) -> np.ndarray:
    """Row feature matrix used for squashing distances.

    Numeric columns are scaled to [0, 1] by their schema domain, which is
    also what representative rows are mapped back through.  When a database
    has no numeric attribute at all, category codes (scaled to [0, 1])
    stand in so that squashing remains defined.
    """
    cols = []
    for j, attr in enumerate(db.attributes):
        if attr.is_numeric:
            col = db.column(j)
            span = attr.max - attr.min
            cols.append((col - attr.min) / span if span else np.zeros_like(col))
    if not cols:
        for j, attr in enumerate(db.attributes):
            col = db.column(j).astype(float)
            k = len(attr.categories)
            cols.append(col / (k - 1) if k > 1 else np.zeros_like(col))
    return np.column_stack(cols)


def _lloyd(
    points: np.ndarray, centroids: np.ndarray, max_iter: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's k-means from explicit initial centroids.

    Empty clusters are reseeded with the point farthest from its assigned
    centroid, so every cluster is non-empty on return.  Distances are
    computed in row blocks to bound memory when k is large.
    """
    n = len(points)
    k = len(centroids)
    centroids = centroids.astype(float).copy()
    labels = np.full(n, -1)
    block = max(1, 2**22 // max(1, 8 * k))
    for _ in range(max_iter):
        new_labels = np.empty(n, dtype=np.int64)
        nearest = np.empty(n)
        for start in range(0, n, block):
            stop = min(n, start + block)
            d2 = ((points[start:stop, None, :] - centroids[None]) ** 2).sum(-1)
            new_labels[start:stop] = d2.argmin(1)
            nearest[start:stop] = d2[np.arange(stop - start), new_labels[start:stop]]
        for c in range(k):
            if np.any(new_labels == c):
                continue
            # steal the most remote point whose cluster keeps a member
            counts = np.bincount(new_labels, minlength=k)
            for far in np.argsort(-nearest, kind="stable"):
                if counts[new_labels[far]] > 1:
                    new_labels[far] = c
                    centroids[c] = points[far]
                    nearest[far] = 0.0
                    break
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centroids[c] = points[labels == c].mean(axis=0)
    return centroids, labels


def squash(
    db: TransactionDatabase, ratio: float, seed: int = 0
) -> TransactionDatabase:
    """Reduce the database to ceil(ratio * N) representative transactions.

    Rows are clustered by k-means on their normalized feature vectors; each
    cluster contributes one representative: cluster centroid values for
    numeric attributes, the cluster mode for categorical ones.  Duplicate
    rows collapse, so the result never has more rows than there are
    distinct feature vectors.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]")
    n = db.n_transactions
    k = math.ceil(ratio * n)
    if k >= n:
        return db
    features = _normalized_features(db)
    distinct = np.unique(features, axis=0)
    k = min(k, len(distinct))

    rng = np.random.default_rng(seed)
    init = distinct[np.sort(rng.choice(len(distinct), size=k, replace=False))]
    centroids, labels = _lloyd(features, init)

    numeric = [j for j, a in enumerate(db.attributes) if a.is_numeric]
    rows = []
    for c in range(k):
        members = np.flatnonzero(labels == c)
        row = []
        for j, attr in enumerate(db.attributes):
            if attr.is_numeric and numeric:
                span = attr.max - attr.min
                coord = centroids[c][numeric.index(j)]
                row.append(float(attr.min + coord * span))
            elif attr.is_numeric:
                row.append(float(db.column(j)[members].mean()))
            else:
                counts = np.bincount(
                    db.column(j)[members], minlength=len(attr.categories)
                )
                row.append(attr.categories[int(counts.argmax())])
        rows.append(tuple(row))

    attributes = []
    for j, attr in enumerate(db.attributes):
        if attr.is_numeric:
            col = np.asarray([r[j] for r in rows])
            attributes.append(
                Attribute(attr.name, AttributeKind.NUMERIC, float(col.min()), float(col.max()))
            )
        else:
            attributes.append(attr)
    return TransactionDatabase(tuple(attributes), tuple(rows))


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    """Population Pearson correlation; None when either side is constant."""
    sx, sy = x.std(), y.std()
    if sx == 0.0 or sy == 0.0:
        return None
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def remove_highly_correlated(
    db: TransactionDatabase, threshold: float = 0.95
) -> TransactionDatabase:
    """Drop the later attribute of every numeric pair with |r| >= threshold.

    Pairs are swept in index order, so of a group of mutually correlated
    attributes only the first survives.  Categorical attributes are never
    dropped and at least one attribute always remains.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    numeric = [j for j, a in enumerate(db.attributes) if a.is_numeric]
    dropped: set[int] = set()
    for a, i in enumerate(numeric):
        if i in dropped:
            continue
        for j in numeric[a + 1 :]:
            if j in dropped:
                continue
            r = _pearson(db.column(i), db.column(j))
            if r is not None and abs(r) >= threshold:
                dropped.add(j)
    if not dropped:
        return db
    keep = [j for j in range(db.n_attributes) if j not in dropped]
    attributes = tuple(db.attributes[j] for j in keep)
    rows = tuple(tuple(row[j] for j in keep) for row in db.rows)
    return TransactionDatabase(attributes, rows)


def kmeans_discretize(db: TransactionDatabase, k: int) -> TransactionDatabase:
    """Replace numeric values by their 1-D k-means cluster centroid.

    Each numeric attribute is clustered independently with
    k' = min(k, distinct values) clusters, seeded at the (i + 0.5)/k'
    quantiles; attributes stay numeric.  Columns with at most k distinct
    values are left untouched.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    updates = {}
    for j, attr in enumerate(db.attributes):
        if not attr.is_numeric:
            continue
        col = db.column(j)
        if len(np.unique(col)) <= k:
            continue
        seeds = np.quantile(col, [(i + 0.5) / k for i in range(k)])
        centroids, labels = _lloyd(col[:, None], seeds[:, None])
        updates[j] = centroids[labels, 0]
    return _replace_numeric(db, updates) if updates else db


def apply_chain(
    db: TransactionDatabase,
    methods: Iterable[PreprocessKind],
    seed: int = 0,
    params: PreprocessParams | None = None,
) -> TransactionDatabase:
    """Apply a subset of the pool in the fixed pool order.

    An empty subset returns the input unchanged.  The seed only feeds the
    squashing step; everything else is deterministic by construction.
    """
    params = params or PreprocessParams()
    selected = set(methods)
    unknown = selected - set(PREPROCESS_POOL)
    if unknown:
        raise ValueError(f"unknown preprocessing method(s): {unknown}")
    for method in PREPROCESS_POOL:
        if method not in selected:
            continue
        if method is PreprocessKind.MM:
            db = min_max(db)
        elif method is PreprocessKind.ZS:
            db = z_score(db)
        elif method is PreprocessKind.DS:
            db = squash(db, params.squash_ratio, derive_seed(seed, "squash"))
        elif method is PreprocessKind.RHC:
            db = remove_highly_correlated(db, params.correlation_threshold)
        elif method is PreprocessKind.DK:
            db = kmeans_discretize(db, params.discretize_k)
    return db
