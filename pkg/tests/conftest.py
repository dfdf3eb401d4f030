import csv

import numpy as np
import pytest

from autonarm.dataset import Attribute, AttributeKind, TransactionDatabase


@pytest.fixture
def toy_db() -> TransactionDatabase:
    """4 transactions over (A numeric in [0, 10], B categorical {r, g, b})."""
    return TransactionDatabase(
        (
            Attribute("A", AttributeKind.NUMERIC, 0.0, 10.0),
            Attribute("B", AttributeKind.CATEGORICAL, categories=("r", "g", "b")),
        ),
        ((2.0, "r"), (5.0, "r"), (7.0, "g"), (9.0, "b")),
    )


def numeric_db(**columns) -> TransactionDatabase:
    """Build an all-numeric database from name -> value-list keywords."""
    names = list(columns)
    values = [list(map(float, columns[n])) for n in names]
    attributes = tuple(
        Attribute(n, AttributeKind.NUMERIC, min(v), max(v))
        for n, v in zip(names, values)
    )
    rows = tuple(
        tuple(values[j][i] for j in range(len(names)))
        for i in range(len(values[0]))
    )
    return TransactionDatabase(attributes, rows)


@pytest.fixture(scope="session")
def wine_csv(tmp_path_factory) -> str:
    """The UCI wine data (178 x 14 incl. the class column) as a CSV file."""
    from sklearn.datasets import load_wine

    raw = load_wine()
    path = tmp_path_factory.mktemp("data") / "wine.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*raw.feature_names, "class"])
        for features, label in zip(raw.data, raw.target):
            writer.writerow([repr(float(v)) for v in features] + [int(label)])
    return str(path)


@pytest.fixture(scope="session")
def wine_db(wine_csv) -> TransactionDatabase:
    from autonarm.dataset import load_csv

    return load_csv(wine_csv)


@pytest.fixture
def bolts_like_db() -> TransactionDatabase:
    """Synthetic 40 x 8 all-numeric database (seeded)."""
    rng = np.random.default_rng(17)
    data = rng.uniform(0.0, 100.0, size=(40, 8))
    return numeric_db(**{f"b{j}": data[:, j] for j in range(8)})
