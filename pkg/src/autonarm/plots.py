"""Diagnostic figures rendered next to report files.

Two figures summarise a result: best-fitness convergence traces of the
runs, and bar charts of how often each inner algorithm, preprocessing
method and metric appeared in the best pipelines.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .search import AggregateReport, RunReport

__all__ = ["save_figures"]


def _convergence(runs: list[RunReport], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for run in runs:
        xs = [i for i, _ in run.fitness_trace]
        ys = [f for _, f in run.fitness_trace]
        ax.step(xs, ys, where="post", alpha=0.6, lw=1.0)
    ax.set_xlabel("pipeline evaluations")
    ax.set_ylabel("best fitness")
    ax.set_title(f"convergence of {len(runs)} run(s)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _bars(ax, counts: dict, title: str) -> None:
    labels = list(counts)
    ax.bar(range(len(labels)), [counts[k] for k in labels], color="#4878d0")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_title(title, fontsize=10)


def _components(agg: AggregateReport, path: Path) -> None:
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.4))
    _bars(axes[0], agg.algorithm_frequency, "inner algorithm frequency")
    _bars(axes[1], agg.preprocessing_frequency, "preprocessing frequency")
    usage = {name: w.used_in for name, w in agg.metric_weights.items()}
    _bars(axes[2], usage, "metric usage (runs)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_figures(
    report: AggregateReport | RunReport, out_dir: str | Path, stem: str
) -> list[Path]:
    """Render figures for a report into ``out_dir``; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    runs = report.runs if isinstance(report, AggregateReport) else [report]
    convergence = out_dir / f"{stem}_convergence.png"
    _convergence(runs, convergence)
    written.append(convergence)
    if isinstance(report, AggregateReport):
        components = out_dir / f"{stem}_components.png"
        _components(report, components)
        written.append(components)
    return written
