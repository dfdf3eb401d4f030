"""Command-line interface.

Subcommands:

* ``validate``   check a config/dataset without running anything
* ``mine``       one inner mining run with a fixed pipeline
* ``search``     one outer pipeline-search run
* ``experiment`` the multi-run protocol with aggregation
* ``compare``    Wilcoxon signed-rank test over two experiment files

Every flag has a config-file equivalent (flat ``key = value`` lines, keys
named like the flags); explicit flags override the file.  All randomness
derives from ``--seed``.  Reports go to ``--out`` (or stdout as JSON when
omitted); human-oriented progress notes go to stderr.
"""

import argparse
import json
import sys
from pathlib import Path

from .dataset import drop_columns, load_csv
from .metrics import METRIC_POOL
from .mining import mine
from .optimizers import OPTIMIZER_POOL, OptimizerBudget, OptimizerKind
from .pipeline import PipelineSpec, SearchConfig
from .preprocess import PREPROCESS_POOL, PreprocessParams, apply_chain
from .report import (
    dumps,
    emit_report,
    experiment_payload,
    provenance,
    search_payload,
    wilcoxon_signed_rank,
)
from .rules import rule_record
from .search import OuterConfig, run_experiment, search
from .seeding import derive_seed

__all__ = ["run_cli", "main"]

_OUTER_KINDS = {"pso": OptimizerKind.PSO, "de": OptimizerKind.DE}
_ALGORITHMS = {k.value.lower(): k for k in OPTIMIZER_POOL}
_PREPROCESS = {p.value.lower(): p for p in PREPROCESS_POOL}
_METRICS = {m.value.lower(): m for m in METRIC_POOL}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _comma_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_dataset_flags(parser):
    parser.add_argument("--dataset", help="CSV dataset path", default=None)
    parser.add_argument(
        "--no-header",
        type=_parse_bool,
        default=False,
        metavar="{true,false}",
        help="dataset file has no header row",
    )
    parser.add_argument(
        "--drop",
        type=_comma_list,
        default=[],
        metavar="NAMES",
        help="comma-separated column names to drop (e.g. a class label)",
    )


def _add_search_flags(parser):
    parser.add_argument(
        "--weight-adaptation",
        type=_parse_bool,
        default=False,
        metavar="{true,false}",
        help="evolve metric weights instead of fixing them at 1.0",
    )
    parser.add_argument(
        "--max-preprocess",
        type=int,
        default=None,
        help="cap on selected preprocessing methods (1 = single method)",
    )
    parser.add_argument("--alpha", type=float, default=1.0, help="support weight")
    parser.add_argument("--beta", type=float, default=1.0, help="confidence weight")
    parser.add_argument(
        "--ds-ratio", type=float, default=0.5, help="squashing row ratio"
    )
    parser.add_argument(
        "--rhc-threshold",
        type=float,
        default=0.95,
        help="correlation threshold for attribute removal",
    )
    parser.add_argument(
        "--dk-k", type=int, default=5, help="clusters for k-means discretization"
    )


def _add_outer_flags(parser):
    parser.add_argument(
        "--outer",
        choices=sorted(_OUTER_KINDS),
        default="pso",
        help="outer search algorithm",
    )
    parser.add_argument("--outer-np", type=int, default=30, help="outer population")
    parser.add_argument(
        "--outer-fes", type=int, default=1000, help="outer pipeline evaluations"
    )
    parser.add_argument("--runs", type=int, default=30, help="independent runs")


def _add_output_flags(parser):
    parser.add_argument("--out", default=None, help="report file (stdout if omitted)")
    parser.add_argument(
        "--format", choices=["json", "csv"], default="json", help="report format"
    )
    parser.add_argument(
        "--plots", default=None, metavar="DIR", help="also render figures into DIR"
    )


def _build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="autonarm",
        description="Automated construction of numerical association rule "
        "mining pipelines.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry = {}

    def sub(name, help_text):
        p = subparsers.add_parser(
            name,
            help=help_text,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--seed", type=int, default=1, help="base random seed")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")
        registry[name] = p
        return p

    p = sub("validate", "check config and dataset, run nothing")
    _add_dataset_flags(p)
    _add_search_flags(p)
    _add_outer_flags(p)

    p = sub("mine", "one inner mining run with a fixed pipeline")
    _add_dataset_flags(p)
    _add_search_flags(p)
    _add_output_flags(p)
    p.add_argument(
        "--algorithm",
        choices=sorted(_ALGORITHMS),
        default="pso",
        help="inner mining algorithm",
    )
    p.add_argument("--np", type=int, default=20, help="inner population size")
    p.add_argument("--maxfes", type=int, default=5000, help="inner evaluations")
    p.add_argument(
        "--preprocess",
        type=_comma_list,
        default=[],
        metavar="METHODS",
        help="comma-separated preprocessing methods (mm,zs,ds,rhc,dk)",
    )
    p.add_argument(
        "--metrics",
        type=_comma_list,
        default=["supp", "conf"],
        metavar="NAMES",
        help="comma-separated metrics (supp,conf,cover,amp,incl,comp)",
    )
    p.add_argument(
        "--weights",
        type=_comma_list,
        default=[],
        metavar="VALUES",
        help="weights matching --metrics (default: all 1.0)",
    )

    p = sub("search", "one outer pipeline-search run")
    _add_dataset_flags(p)
    _add_search_flags(p)
    _add_outer_flags(p)
    _add_output_flags(p)

    p = sub("experiment", "multi-run search with aggregate statistics")
    _add_dataset_flags(p)
    _add_search_flags(p)
    _add_outer_flags(p)
    _add_output_flags(p)

    p = sub("compare", "Wilcoxon signed-rank test over two experiment files")
    p.add_argument("left", help="first experiment JSON report")
    p.add_argument("right", help="second experiment JSON report")
    p.add_argument("--out", default=None, help="write the result as JSON")

    return parser, registry


def _read_config(path: str) -> dict[str, str]:
    values = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(subparser, config: dict[str, str]) -> None:
    known = {}
    for action in subparser._actions:
        if action.dest in config:
            raw = config[action.dest]
            known[action.dest] = action.type(raw) if action.type else raw
    unknown = set(config) - {a.dest for a in subparser._actions}
    if unknown:
        raise ValueError(f"unknown config key(s): {sorted(unknown)}")
    subparser.set_defaults(**known)


def _load_database(args):
    if not args.dataset:
        raise ValueError("--dataset is required")
    db = load_csv(args.dataset, header=not args.no_header)
    if args.drop:
        db = drop_columns(db, args.drop)
    return db


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        weight_adaptation=args.weight_adaptation,
        alpha=args.alpha,
        beta=args.beta,
        max_preprocess=args.max_preprocess,
        preprocess_params=PreprocessParams(
            squash_ratio=args.ds_ratio,
            correlation_threshold=args.rhc_threshold,
            discretize_k=args.dk_k,
        ),
    )


def _outer_config(args) -> OuterConfig:
    return OuterConfig(
        outer_kind=_OUTER_KINDS[args.outer],
        outer_np=args.outer_np,
        outer_maxfes=args.outer_fes,
        runs=args.runs,
        base_seed=args.seed,
    )


def _meta(args, keys) -> dict:
    return {key: getattr(args, key.replace("-", "_")) for key in keys}


def _deliver(args, report, payload, meta) -> None:
    if args.out:
        emit_report(report, format=args.format, path=args.out, meta=meta)
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(dumps(payload))
    if args.plots:
        from .plots import save_figures

        stem = Path(args.out).stem if args.out else args.command
        for path in save_figures(report, args.plots, stem):
            print(f"figure written to {path}", file=sys.stderr)


def _cmd_validate(args) -> int:
    cfg = _search_config(args)
    outer = _outer_config(args)
    db = _load_database(args)
    print(f"dataset: {args.dataset}")
    print(f"transactions: {db.n_transactions}")
    print(f"attributes: {db.n_attributes}")
    for attr in db.attributes:
        if attr.is_numeric:
            print(f"  {attr.name}: numeric [{attr.min:g}, {attr.max:g}]")
        else:
            print(f"  {attr.name}: categorical ({len(attr.categories)} values)")
    print(f"search dimension: {cfg.dimension}")
    print(f"outer: {outer.outer_kind.value} np={outer.outer_np} "
          f"maxfes={outer.outer_maxfes} runs={outer.runs}")
    print("ok")
    return 0


def _cmd_mine(args) -> int:
    db = _load_database(args)
    cfg = _search_config(args)
    try:
        methods = tuple(_PREPROCESS[m.lower()] for m in args.preprocess)
        metrics = tuple(_METRICS[m.lower()] for m in args.metrics)
    except KeyError as exc:
        raise ValueError(f"unknown name {exc.args[0]!r}") from None
    if args.weights:
        if len(args.weights) != len(metrics):
            raise ValueError("--weights must match --metrics in length")
        weights = {m: float(w) for m, w in zip(metrics, args.weights)}
    else:
        weights = {m: 1.0 for m in metrics}
    spec = PipelineSpec(
        algorithm=_ALGORITHMS[args.algorithm],
        np=args.np,
        maxfes=args.maxfes,
        preprocessing=methods,
        metrics=metrics,
        weights=weights,
    )
    prepared = apply_chain(
        db, methods, derive_seed(args.seed, "prep"), cfg.preprocess_params
    )
    archive = mine(
        prepared,
        spec.algorithm,
        OptimizerBudget(spec.np, spec.maxfes, derive_seed(args.seed, "mine")),
        metrics,
        weights,
    )
    payload = {
        "schema_version": 1,
        "kind": "mine",
        "meta": _meta(args, ["dataset", "seed"]),
        "provenance": provenance(),
        "spec": spec.to_record(),
        "rule_count": len(archive),
        "mean_support": archive.mean_support,
        "mean_confidence": archive.mean_confidence,
        "rules": [
            {
                **rule_record(e.rule, prepared),
                "metrics": {k.value: v for k, v in e.metrics.items()},
                "fitness": e.fitness,
            }
            for e in archive.entries
        ],
    }
    if args.out:
        Path(args.out).write_text(dumps(payload), encoding="utf-8")
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(dumps(payload))
    print(
        f"{len(archive)} rules, mean support {archive.mean_support:.4f}, "
        f"mean confidence {archive.mean_confidence:.4f}",
        file=sys.stderr,
    )
    return 0


_META_KEYS = [
    "dataset",
    "drop",
    "outer",
    "runs",
    "outer-np",
    "outer-fes",
    "weight-adaptation",
    "max-preprocess",
    "alpha",
    "beta",
    "seed",
]


def _cmd_search(args) -> int:
    db = _load_database(args)
    cfg = _search_config(args)
    outer = _outer_config(args)
    report = search(db, cfg, outer, run_index=0)
    meta = _meta(args, _META_KEYS)
    _deliver(args, report, search_payload(report, meta), meta)
    print(
        f"best fitness {report.best_fitness:.6f} with "
        f"{report.best_spec.algorithm.value}, {report.rule_count} rules "
        f"({report.wall_time:.1f}s)",
        file=sys.stderr,
    )
    return 0


def _cmd_experiment(args) -> int:
    db = _load_database(args)
    cfg = _search_config(args)
    outer = _outer_config(args)
    aggregate = run_experiment(db, cfg, outer, jobs=args.jobs)
    meta = _meta(args, _META_KEYS)
    _deliver(args, aggregate, experiment_payload(aggregate, meta), meta)
    print(
        f"{outer.runs} runs: fitness {aggregate.fitness_mean:.4f} "
        f"± {aggregate.fitness_std:.4f}, rules {aggregate.rule_count_mean:.1f}",
        file=sys.stderr,
    )
    return 0


def _cmd_compare(args) -> int:
    samples = []
    for path in (args.left, args.right):
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if "runs" not in payload:
            raise ValueError(f"{path}: not an experiment report")
        samples.append([run["best_fitness"] for run in payload["runs"]])
    result = wilcoxon_signed_rank(samples[0], samples[1])
    print(f"statistic: {result.statistic:g}")
    print(f"p_value: {result.p_value:.6g}")
    print(f"n_effective: {result.n_effective}")
    if args.out:
        Path(args.out).write_text(
            dumps(
                {
                    "kind": "comparison",
                    "left": args.left,
                    "right": args.right,
                    "statistic": result.statistic,
                    "p_value": result.p_value,
                    "n_effective": result.n_effective,
                }
            ),
            encoding="utf-8",
        )
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "mine": _cmd_mine,
    "search": _cmd_search,
    "experiment": _cmd_experiment,
    "compare": _cmd_compare,
}


def run_cli(argv: list[str]) -> int:
    """Parse arguments and execute a subcommand; returns the exit status."""
    parser, registry = _build_parser()
    try:
        probe, _ = parser.parse_known_args(argv)
        if getattr(probe, "config", None):
            _apply_config(registry[probe.command], _read_config(probe.config))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[args.command](args)
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
