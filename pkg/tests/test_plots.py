from autonarm.optimizers import OptimizerKind
from autonarm.pipeline import SearchConfig
from autonarm.plots import save_figures
from autonarm.search import OuterConfig, run_experiment, search


def small(runs=2):
    cfg = SearchConfig(np_range=(8, 10), maxfes_range=(60, 120))
    outer = OuterConfig(
        outer_kind=OptimizerKind.PSO,
        outer_np=6,
        outer_maxfes=12,
        runs=runs,
        base_seed=2,
    )
    return cfg, outer


def test_run_report_renders_convergence_only(tmp_path, toy_db):
    cfg, outer = small()
    report = search(toy_db, cfg, outer, 0)
    written = save_figures(report, tmp_path, "single")
    assert [p.name for p in written] == ["single_convergence.png"]
    assert all(p.stat().st_size > 0 for p in written)


def test_aggregate_renders_both_figures(tmp_path, toy_db):
    cfg, outer = small(runs=2)
    agg = run_experiment(toy_db, cfg, outer)
    written = save_figures(agg, tmp_path / "nested", "exp")
    assert [p.name for p in written] == [
        "exp_convergence.png",
        "exp_components.png",
    ]
    assert all(p.stat().st_size > 0 for p in written)
