"""Statistics and result serialization.

Holds the Wilcoxon signed-rank comparison used to compare experiment
outcomes, and the JSON/CSV emitters.  JSON floats are written with 17
significant digits so files round-trip losslessly and identical inputs
yield byte-identical files; volatile values (wall-clock times) are never
serialized.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .optimizers import optimizer_defaults
from .rules import CODEC_VERSION
from .search import AggregateReport, RunReport

__all__ = [
    "ComparisonResult",
    "LengthMismatchError",
    "TooFewPairsError",
    "wilcoxon_signed_rank",
    "emit_report",
    "run_payload",
    "experiment_payload",
    "search_payload",
    "dumps",
]

# Largest effective sample size handled by exact enumeration.
EXACT_LIMIT = 25


class LengthMismatchError(ValueError):
    """The two samples have different lengths."""


class TooFewPairsError(ValueError):
    """Fewer than five pairs, or no non-zero differences remain."""


@dataclass(frozen=True)
class ComparisonResult:
    statistic: float
    p_value: float
    n_effective: int


def _average_ranks(values: list[float]) -> list[float]:
    """1-based ranks with tied values receiving their average rank."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _exact_p(doubled_ranks: list[int], w_plus_doubled: int) -> float:
    """Two-sided exact p over all sign patterns, by subset-sum counting.

    The rank-sum distribution under the null is symmetric around half the
    total, so the p-value is the probability of a deviation from the centre
    at least as large as the observed one.
    """
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled_ranks:
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    centre = total / 2.0
    deviation = abs(w_plus_doubled - centre)
    hits = sum(c for s, c in enumerate(counts) if abs(s - centre) >= deviation)
    return hits / 2 ** len(doubled_ranks)


def _normal_p(
    w_plus: float, n: int, tie_sizes: list[int]
) -> float:
    """Two-sided normal approximation with tie and continuity correction."""
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - sum(
        t**3 - t for t in tie_sizes
    ) / 48.0
    deviation = abs(w_plus - mean)
    if deviation <= 0.5:
        return 1.0
    z = (deviation - 0.5) / math.sqrt(variance)
    return math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank(a: list[float], b: list[float]) -> ComparisonResult:
    """Paired two-sided Wilcoxon signed-rank test.

    Zero differences are dropped; tied absolute differences receive
    averaged ranks.  Up to 25 effective pairs the p-value is exact
    (enumeration of the signed rank-sum distribution); beyond that it uses
    the normal approximation with tie and continuity correction.  The
    statistic is min(W+, W-).
    """
    if len(a) != len(b):
        raise LengthMismatchError(f"sample sizes differ: {len(a)} vs {len(b)}")
    if len(a) < 5:
        raise TooFewPairsError(f"need at least 5 pairs, got {len(a)}")
    diffs = [float(x) - float(y) for x, y in zip(a, b)]
    diffs = [d for d in diffs if d != 0.0]
    n = len(diffs)
    if n == 0:
        raise TooFewPairsError("all differences are zero")

    magnitudes = [abs(d) for d in diffs]
    ranks = _average_ranks(magnitudes)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0.0)
    w_minus = n * (n + 1) / 2.0 - w_plus

    if n <= EXACT_LIMIT:
        doubled = [int(round(2.0 * r)) for r in ranks]
        p = _exact_p(doubled, int(round(2.0 * w_plus)))
    else:
        sizes = sorted(magnitudes)
        tie_sizes = []
        i = 0
        while i < n:
            j = i
            while j + 1 < n and sizes[j + 1] == sizes[i]:
                j += 1
            tie_sizes.append(j - i + 1)
            i = j + 1
        p = _normal_p(w_plus, n, tie_sizes)

    return ComparisonResult(min(w_plus, w_minus), min(p, 1.0), n)


# ---------------------------------------------------------------------------
# Serialization


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite float {value}")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _write(value, out: list[str], indent: int) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f"{inner}{json.dumps(str(key), ensure_ascii=False)}: ")
            _write(item, out, indent + 1)
            out.append(",\n" if i + 1 < len(value) else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not len(value):
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(value):
            out.append(inner)
            _write(item, out, indent + 1)
            out.append(",\n" if i + 1 < len(value) else "\n")
        out.append(pad + "]")
    else:
        out.append(_json_value(value))


def dumps(payload: dict) -> str:
    """Deterministic JSON text with full-precision floats."""
    out: list[str] = []
    _write(payload, out, 0)
    out.append("\n")
    return "".join(out)


def provenance() -> dict:
    """Fixed decisions recorded in every report for traceability."""
    return {
        "rule_codec": CODEC_VERSION,
        "metric_convention": (
            "all metrics are ratios of satisfaction fractions; "
            "zero denominators evaluate to 0; amplitude is not clamped"
        ),
        "wilcoxon": (
            f"two-sided, zero differences dropped, exact up to n={EXACT_LIMIT}, "
            "normal approximation with tie and continuity correction beyond"
        ),
        "optimizer_defaults": optimizer_defaults(),
    }


def run_payload(report: RunReport, include_rules: bool = False) -> dict:
    payload = {
        "run_index": report.run_index,
        "seeds": dict(report.seeds),
        "best_fitness": float(report.best_fitness),
        "rule_count": int(report.rule_count),
        "spec": report.best_spec.to_record(),
        "genotype": [float(g) for g in report.best_genotype],
        "trace": [[int(i), float(f)] for i, f in report.fitness_trace],
    }
    if include_rules:
        payload["rules"] = report.rules
    return payload


def _weight_record(summary) -> dict:
    return {
        "used_in": summary.used_in,
        "mean": summary.mean,
        "std": summary.std,
    }


def aggregate_payload(agg: AggregateReport) -> dict:
    return {
        "fitness": {"mean": agg.fitness_mean, "std": agg.fitness_std},
        "rule_count": {"mean": agg.rule_count_mean, "std": agg.rule_count_std},
        "np": {"mean": agg.np_mean, "std": agg.np_std},
        "maxfes": {"mean": agg.maxfes_mean, "std": agg.maxfes_std},
        "algorithm_frequency": dict(agg.algorithm_frequency),
        "preprocessing_frequency": dict(agg.preprocessing_frequency),
        "preprocessing_combinations": dict(agg.preprocessing_combinations),
        "metric_weights": {
            name: _weight_record(s) for name, s in agg.metric_weights.items()
        },
    }


def experiment_payload(agg: AggregateReport, meta: dict | None = None) -> dict:
    return {
        "schema_version": 1,
        "kind": "experiment",
        "meta": meta or {},
        "provenance": provenance(),
        "aggregate": aggregate_payload(agg),
        "runs": [run_payload(r) for r in agg.runs],
    }


def search_payload(report: RunReport, meta: dict | None = None) -> dict:
    return {
        "schema_version": 1,
        "kind": "run",
        "meta": meta or {},
        "provenance": provenance(),
        "run": run_payload(report, include_rules=True),
    }


_CSV_HEADER = [
    "run",
    "seed",
    "best_fitness",
    "rule_count",
    "algorithm",
    "np",
    "maxfes",
    "preprocessing",
    "metrics",
    "weights",
]


def _csv_row(report: RunReport) -> list:
    spec = report.best_spec
    return [
        report.run_index,
        report.seeds["run"],
        format(report.best_fitness, ".17g"),
        report.rule_count,
        spec.algorithm.value,
        spec.np,
        spec.maxfes,
        "+".join(p.value for p in spec.preprocessing) or "none",
        "+".join(m.value for m in spec.metrics),
        ";".join(
            f"{m.value}={format(w, '.17g')}" for m, w in spec.weights.items()
        ),
    ]


def emit_report(
    report: AggregateReport | RunReport,
    format: str = "json",
    path: str | Path = "report.json",
    meta: dict | None = None,
) -> Path:
    """Write a report file and return its path.

    JSON carries the full structured report; CSV is a flat per-run table
    (header plus one row per run).
    """
    path = Path(path)
    if format == "json":
        if isinstance(report, AggregateReport):
            payload = experiment_payload(report, meta)
        else:
            payload = search_payload(report, meta)
        path.write_text(dumps(payload), encoding="utf-8")
    elif format == "csv":
        runs = report.runs if isinstance(report, AggregateReport) else [report]
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CSV_HEADER)
            for run in runs:
                writer.writerow(_csv_row(run))
    else:
        raise ValueError(f"unknown report format {format!r}")
    return path
