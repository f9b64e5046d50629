"""Random-instance generation, load-balance metric, and benchmark sweeps.

Instances are drawn uniformly over a square with a portable seeded
generator (PCG64 keyed by ``SeedSequence([seed, trial_index])``, APs
drawn before TDs), so every trial is reproducible from its config.  Each
experiment runs a config for a number of trials, times the solve calls,
and averages total power, wall time, and the coverage-balance variance
``sum_a (|C_a| - n/m)^2 / m``.
"""

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from time import perf_counter

import numpy as np

from .baselines import (
    STATUS_BUDGET_EXCEEDED,
    STATUS_OPTIMAL,
    ExactBudget,
    solve_exact,
    solve_nca,
)
from .model import Instance, Solution, check_feasible
from .mlr import solve_mlr

__all__ = [
    "DEFAULT_SEED",
    "ExperimentConfig",
    "TrialRow",
    "AlgorithmSummary",
    "ExperimentReport",
    "ExperimentError",
    "config_violations",
    "generate_instance",
    "utilization_variance",
    "run_experiment",
    "preset",
    "sweep_parameter",
    "run_sweep",
    "truncate_sweep",
    "override_configs",
    "write_results_csv",
    "write_plot_csvs",
    "RESULT_COLUMNS",
]

DEFAULT_SEED = 1729

RESULT_COLUMNS = [
    "series",
    "config_id",
    "trial",
    "algorithm",
    "n",
    "m",
    "k",
    "side",
    "alpha",
    "total_power",
    "wall_ms",
    "variance",
    "status",
]


class ExperimentError(RuntimeError):
    """A trial produced an infeasible solution; carries the offending
    (config, trial, seed) triple for reproduction."""


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    m: int
    k: int
    side: float
    power_c: float = 1.0
    power_alpha: float = 2.0
    trials: int = 50
    seed: int = DEFAULT_SEED
    algorithms: tuple[str, ...] = ("mlr", "nca")
    exact_budget: ExactBudget = ExactBudget()


@dataclass(frozen=True)
class TrialRow:
    trial: int
    algorithm: str
    total_power: float | None
    wall_ms: float
    variance: float | None
    status: str


@dataclass(frozen=True)
class AlgorithmSummary:
    algorithm: str
    mean_total_power: float | None
    mean_wall_ms: float | None
    mean_variance: float | None
    completed: int
    trials: int

    @property
    def completion_rate(self) -> float:
        return self.completed / self.trials


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[TrialRow]
    summary: dict[str, AlgorithmSummary]


def config_violations(cfg: ExperimentConfig) -> list[str]:
    v = []
    if cfg.n < 1 or cfg.m < 1 or cfg.k < 1:
        v.append("n, m, and k must all be at least 1")
    elif cfg.m * cfg.k < cfg.n:
        v.append(f"total capacity m*k = {cfg.m * cfg.k} cannot cover n = {cfg.n} TDs")
    if not cfg.side > 0:
        v.append(f"side length {cfg.side} must be positive")
    if cfg.trials < 1:
        v.append("trials must be at least 1")
    if cfg.seed < 0:
        v.append("seed must be non-negative")
    unknown = [a for a in cfg.algorithms if a not in ("mlr", "nca", "exact")]
    if unknown:
        v.append(f"unknown algorithms {unknown}")
    return v


def generate_instance(cfg: ExperimentConfig, trial_index: int) -> Instance:
    """Uniform random instance for one trial, reproducible from
    (seed, trial_index, n, m, side)."""
    gen = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([cfg.seed, trial_index]))
    )
    ap_xy = gen.random((cfg.m, 2)) * cfg.side
    td_xy = gen.random((cfg.n, 2)) * cfg.side
    return Instance.from_coords(
        aps=ap_xy.tolist(),
        tds=td_xy.tolist(),
        k=cfg.k,
        power_c=cfg.power_c,
        power_alpha=cfg.power_alpha,
    )


def utilization_variance(sol: Solution, inst: Instance) -> float:
    """Variance of per-AP coverage counts around the balanced load n/m.

    APs that cover nothing count with size zero; the value is zero
    exactly when every AP covers n/m TDs.
    """
    target = inst.n / inst.m
    acc = 0.0
    for ap_id in range(1, inst.m + 1):
        diff = len(sol.coverage.get(ap_id, ())) - target
        acc += diff * diff
    return acc / inst.m


def _solve_timed(algorithm: str, inst: Instance, cfg: ExperimentConfig):
    """Run one solver; returns (solution_or_None, wall_ms, status)."""
    if algorithm == "mlr":
        t0 = perf_counter()
        sol = solve_mlr(inst)
        return sol, (perf_counter() - t0) * 1e3, "ok"
    if algorithm == "nca":
        t0 = perf_counter()
        sol = solve_nca(inst)
        return sol, (perf_counter() - t0) * 1e3, "ok"
    if algorithm == "exact":
        t0 = perf_counter()
        res = solve_exact(inst, cfg.exact_budget)
        wall = (perf_counter() - t0) * 1e3
        if res.status != STATUS_OPTIMAL:
            return None, wall, STATUS_BUDGET_EXCEEDED
        return res.solution, wall, "ok"
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run every configured algorithm over all trials and aggregate.

    Budget misses of the exact solver are excluded from its means and
    show up in the completion rate.  An infeasible solver output aborts
    the experiment with the offending trial's details.
    """
    problems = config_violations(cfg)
    if problems:
        raise ExperimentError(f"invalid config {cfg}: " + "; ".join(problems))
    rows: list[TrialRow] = []
    for trial in range(cfg.trials):
        inst = generate_instance(cfg, trial)
        for algorithm in cfg.algorithms:
            sol, wall_ms, status = _solve_timed(algorithm, inst, cfg)
            if sol is None:
                rows.append(TrialRow(trial, algorithm, None, wall_ms, None, status))
                continue
            violations = check_feasible(sol, inst)
            if violations:
                raise ExperimentError(
                    f"infeasible {algorithm} output at config={cfg}, "
                    f"trial={trial}, seed={cfg.seed}: {violations}"
                )
            rows.append(
                TrialRow(
                    trial,
                    algorithm,
                    sol.total_power,
                    wall_ms,
                    utilization_variance(sol, inst),
                    status,
                )
            )
    summary = {}
    for algorithm in cfg.algorithms:
        done = [r for r in rows if r.algorithm == algorithm and r.status == "ok"]
        summary[algorithm] = AlgorithmSummary(
            algorithm=algorithm,
            mean_total_power=(
                sum(r.total_power for r in done) / len(done) if done else None
            ),
            mean_wall_ms=(sum(r.wall_ms for r in done) / len(done) if done else None),
            mean_variance=(
                sum(r.variance for r in done) / len(done) if done else None
            ),
            completed=len(done),
            trials=cfg.trials,
        )
    return ExperimentReport(config=cfg, rows=rows, summary=summary)


def preset(series: int) -> list[ExperimentConfig]:
    """Benchmark sweeps.

    1: n grows with m = ceil(n/25), k = 40.
    2: capacity sweep k in {25, 50, 75, 100} at n = 100, m = 4.
    3: AP sweep m in {4, 8, 12, 16, 20} at n = 100, k = 25.
    4: AP sweep under a fixed capacity budget of 160, so m is limited to
       values where k = 160/m is integral.

    All presets use a side-40 square, alpha = 2, c = 1, and 50 trials.
    The exact solver is omitted: its practical range (roughly n <= 12)
    sits below every sweep point.
    """
    if series == 1:
        return [
            ExperimentConfig(n=n, m=max(1, math.ceil(n / 25)), k=40, side=40.0)
            for n in (20, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500)
        ]
    if series == 2:
        return [ExperimentConfig(n=100, m=4, k=k, side=40.0) for k in (25, 50, 75, 100)]
    if series == 3:
        return [ExperimentConfig(n=100, m=m, k=25, side=40.0) for m in (4, 8, 12, 16, 20)]
    if series == 4:
        return [
            ExperimentConfig(n=100, m=m, k=160 // m, side=40.0)
            for m in (4, 8, 10, 16, 20)
        ]
    raise ValueError(f"unknown preset series {series!r}")


def sweep_parameter(series) -> str:
    return {1: "n", 2: "k", 3: "m", 4: "m"}.get(series, "config_id")


def run_sweep(
    configs: list[ExperimentConfig],
    series,
    out_dir: str | Path,
    progress=None,
) -> list[ExperimentReport]:
    """Run a config list, writing raw rows and per-metric plot CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    for config_id, cfg in enumerate(configs):
        report = run_experiment(cfg)
        reports.append(report)
        if progress is not None:
            parts = [f"series={series}", f"config={config_id}",
                     f"n={cfg.n}", f"m={cfg.m}", f"k={cfg.k}"]
            for algorithm, s in report.summary.items():
                if s.mean_total_power is not None:
                    parts.append(f"{algorithm}_mean={s.mean_total_power:.6g}")
            progress(" ".join(parts))
    write_results_csv(out / "results.csv", series, configs, reports)
    write_plot_csvs(out, series, configs, reports)
    return reports


def _csv_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_results_csv(path, series, configs, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for config_id, (cfg, report) in enumerate(zip(configs, reports)):
            for row in report.rows:
                writer.writerow(
                    [
                        _csv_value(series),
                        _csv_value(config_id),
                        _csv_value(row.trial),
                        row.algorithm,
                        _csv_value(cfg.n),
                        _csv_value(cfg.m),
                        _csv_value(cfg.k),
                        _csv_value(cfg.side),
                        _csv_value(cfg.power_alpha),
                        _csv_value(row.total_power),
                        _csv_value(row.wall_ms),
                        _csv_value(row.variance),
                        row.status,
                    ]
                )


def write_plot_csvs(out_dir, series, configs, reports) -> None:
    """One CSV per figure axis: sweep value then per-algorithm means."""
    out = Path(out_dir)
    param = sweep_parameter(series)
    algorithms: list[str] = []
    for cfg in configs:
        for a in cfg.algorithms:
            if a not in algorithms:
                algorithms.append(a)
    metrics = {
        "mean_total_power.csv": "mean_total_power",
        "mean_wall_ms.csv": "mean_wall_ms",
        "mean_variance.csv": "mean_variance",
    }
    for filename, attr in metrics.items():
        with open(out / filename, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([param, *algorithms])
            for config_id, (cfg, report) in enumerate(zip(configs, reports)):
                value = {
                    "n": cfg.n, "k": cfg.k, "m": cfg.m, "config_id": config_id
                }[param]
                cells = [_csv_value(value)]
                for a in algorithms:
                    s = report.summary.get(a)
                    cells.append(_csv_value(getattr(s, attr) if s else None))
                writer.writerow(cells)


def truncate_sweep(configs: list[ExperimentConfig], max_n: int | None):
    if max_n is None:
        return configs
    return [cfg for cfg in configs if cfg.n <= max_n]


def override_configs(
    configs: list[ExperimentConfig],
    trials: int | None = None,
    seed: int | None = None,
) -> list[ExperimentConfig]:
    out = []
    for cfg in configs:
        updates = {}
        if trials is not None:
            updates["trials"] = trials
        if seed is not None:
            updates["seed"] = seed
        out.append(replace(cfg, **updates) if updates else cfg)
    return out
