"""Transaction databases: CSV loading, schema inference and attribute domains.

A transaction database is an immutable, rectangular table whose columns are
either numeric (every cell parses as a finite real) or categorical (anything
else).  Attribute order is the column order of the source file and is the
canonical order used by the rule codec.
"""

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "AttributeKind",
    "Attribute",
    "TransactionDatabase",
    "EmptyDatasetError",
    "RaggedRowsError",
    "MissingValueError",
    "load_csv",
    "save_csv",
    "attribute_domain",
    "drop_columns",
]


class EmptyDatasetError(ValueError):
    """The source contains no data rows."""


class RaggedRowsError(ValueError):
    """A row has a different number of cells than the first row."""

    def __init__(self, row_index: int, expected: int, got: int):
        self.row_index = row_index
        super().__init__(
            f"row {row_index} has {got} cells, expected {expected}"
        )


class MissingValueError(ValueError):
    """An empty cell was encountered; missing values are not supported."""

    def __init__(self, row_index: int, column_index: int):
        self.row_index = row_index
        self.column_index = column_index
        super().__init__(f"empty cell at row {row_index}, column {column_index}")


class AttributeKind(Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class Attribute:
    """Schema entry for one column.

    Numeric attributes carry their observed [min, max] domain; categorical
    attributes carry their distinct values in first-appearance order.
    """

    name: str
    kind: AttributeKind
    min: float = 0.0
    max: float = 0.0
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind is AttributeKind.NUMERIC:
            if not (math.isfinite(self.min) and math.isfinite(self.max)):
                raise ValueError(f"attribute {self.name}: non-finite domain")
            if self.min > self.max:
                raise ValueError(f"attribute {self.name}: min > max")
        else:
            if not self.categories:
                raise ValueError(f"attribute {self.name}: no categories")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"attribute {self.name}: duplicate categories")

    @property
    def is_numeric(self) -> bool:
        return self.kind is AttributeKind.NUMERIC


def _parse_numeric(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class TransactionDatabase:
    """Immutable table of transactions with a typed attribute schema.

    Rows hold floats for numeric attributes and category strings for
    categorical ones.  Column arrays (float values, or integer category
    codes) are cached at construction for fast rule evaluation and are safe
    to share across threads and processes.
    """

    attributes: tuple[Attribute, ...]
    rows: tuple[tuple, ...]
    _columns: tuple[np.ndarray, ...] = field(
        default=(), repr=False, compare=False
    )
    _codes: tuple[dict, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self.rows:
            raise EmptyDatasetError("database must contain at least one row")
        width = len(self.attributes)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise RaggedRowsError(i, width, len(row))

        columns = []
        codes: list[dict] = []
        for j, attr in enumerate(self.attributes):
            cells = [row[j] for row in self.rows]
            if attr.is_numeric:
                col = np.asarray(cells, dtype=float)
                if not np.all(np.isfinite(col)):
                    raise ValueError(f"attribute {attr.name}: non-finite cell")
                if col.min() < attr.min or col.max() > attr.max:
                    raise ValueError(
                        f"attribute {attr.name}: cell outside [min, max]"
                    )
                columns.append(col)
                codes.append({})
            else:
                lookup = {c: k for k, c in enumerate(attr.categories)}
                try:
                    col = np.asarray([lookup[c] for c in cells], dtype=np.int64)
                except KeyError as exc:
                    raise ValueError(
                        f"attribute {attr.name}: unknown category {exc.args[0]!r}"
                    ) from None
                columns.append(col)
                codes.append(lookup)
        object.__setattr__(self, "_columns", tuple(columns))
        object.__setattr__(self, "_codes", tuple(codes))

    @property
    def n_transactions(self) -> int:
        return len(self.rows)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def column(self, index: int) -> np.ndarray:
        """Column as a numpy array: float values, or category codes."""
        return self._columns[index]

    def category_code(self, index: int, category: str) -> int:
        return self._codes[index][category]


def _infer_attribute(name: str, cells: list[str]) -> tuple[Attribute, list]:
    """Infer one column's schema and convert its cells."""
    numeric = [_parse_numeric(c) for c in cells]
    if all(v is not None for v in numeric):
        return (
            Attribute(name, AttributeKind.NUMERIC, min(numeric), max(numeric)),
            numeric,
        )
    seen: dict[str, None] = {}
    for c in cells:
        seen.setdefault(c, None)
    return (
        Attribute(name, AttributeKind.CATEGORICAL, categories=tuple(seen)),
        list(cells),
    )


def load_csv(path: str | Path, header: bool = True) -> TransactionDatabase:
    """Load a transaction database from a comma-separated UTF-8 file.

    A column is numeric iff every cell parses as a finite real (`.` decimal
    separator); otherwise it is categorical.  Integers are stored as reals.

    Args:
        path: CSV file location.
        header: whether the first line holds column names.  Without a
            header, columns are named ``attr0``, ``attr1``, ...

    Raises:
        FileNotFoundError: the file does not exist.
        EmptyDatasetError: no data rows.
        RaggedRowsError: rows of differing width.
        MissingValueError: an empty cell (missing values are rejected).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    with path.open(newline="", encoding="utf-8") as fh:
        records = [row for row in csv.reader(fh) if row]

    names: list[str]
    if header:
        if not records:
            raise EmptyDatasetError(f"{path}: no rows")
        names, records = list(records[0]), records[1:]
    else:
        names = []
    if not records:
        raise EmptyDatasetError(f"{path}: no data rows")

    width = len(records[0])
    if not names:
        names = [f"attr{j}" for j in range(width)]
    if len(names) != width:
        raise RaggedRowsError(0, len(names), width)
    for i, rec in enumerate(records):
        if len(rec) != width:
            raise RaggedRowsError(i, width, len(rec))
        for j, cell in enumerate(rec):
            if cell == "":
                raise MissingValueError(i, j)

    attributes = []
    converted = []
    for j in range(width):
        attr, cells = _infer_attribute(names[j], [rec[j] for rec in records])
        attributes.append(attr)
        converted.append(cells)
    rows = tuple(
        tuple(converted[j][i] for j in range(width)) for i in range(len(records))
    )
    return TransactionDatabase(tuple(attributes), rows)


def save_csv(db: TransactionDatabase, path: str | Path) -> None:
    """Write a database back to CSV; reloading yields an identical database.

    Numeric cells are written with ``repr`` so they parse back to the exact
    same float.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([a.name for a in db.attributes])
        for row in db.rows:
            writer.writerow(
                [repr(c) if isinstance(c, float) else c for c in row]
            )


def attribute_domain(db: TransactionDatabase, index: int):
    """Domain of one attribute: ``(min, max)`` or the category tuple.

    Raises IndexError when the index is out of range.
    """
    if not 0 <= index < db.n_attributes:
        raise IndexError(f"attribute index {index} out of range")
    attr = db.attributes[index]
    if attr.is_numeric:
        return (attr.min, attr.max)
    return attr.categories


def drop_columns(db: TransactionDatabase, names: list[str]) -> TransactionDatabase:
    """Return a database without the named columns (e.g. a class label)."""
    unknown = set(names) - {a.name for a in db.attributes}
    if unknown:
        raise KeyError(f"no such column(s): {sorted(unknown)}")
    keep = [j for j, a in enumerate(db.attributes) if a.name not in set(names)]
    if not keep:
        raise EmptyDatasetError("cannot drop every column")
    attributes = tuple(db.attributes[j] for j in keep)
    rows = tuple(tuple(row[j] for j in keep) for row in db.rows)
    return TransactionDatabase(attributes, rows)
