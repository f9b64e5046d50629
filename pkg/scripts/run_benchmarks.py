#!/usr/bin/env python3
"""Run a benchmark preset and write raw-results and plot-data CSVs.

Example:
    python3 scripts/run_benchmarks.py --preset 2 --out-dir results/preset2
    python3 scripts/run_benchmarks.py --preset 1 --max-n 200 --trials 50 \
        --out-dir results/preset1_desk
"""

import argparse

from mpcc import experiments


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--preset", type=int, choices=(1, 2, 3, 4), required=True)
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--max-n", type=int, default=None)
    args = parser.parse_args()

    configs = experiments.truncate_sweep(experiments.preset(args.preset), args.max_n)
    configs = experiments.override_configs(configs, trials=args.trials, seed=args.seed)
    reports = experiments.run_sweep(configs, args.preset, args.out_dir, progress=print)

    param = experiments.sweep_parameter(args.preset)
    print()
    print(f"{param:>6}  {'algorithm':>9}  {'mean_power':>14}  {'mean_ms':>10}  "
          f"{'mean_variance':>14}  {'completed':>9}")
    for cfg, report in zip(configs, reports):
        value = {"n": cfg.n, "k": cfg.k, "m": cfg.m}.get(param, "-")
        for algorithm, s in report.summary.items():
            power = f"{s.mean_total_power:.4f}" if s.mean_total_power is not None else "-"
            wall = f"{s.mean_wall_ms:.3f}" if s.mean_wall_ms is not None else "-"
            var = f"{s.mean_variance:.4f}" if s.mean_variance is not None else "-"
            print(f"{value:>6}  {algorithm:>9}  {power:>14}  {wall:>10}  "
                  f"{var:>14}  {s.completed:>4}/{s.trials}")


if __name__ == "__main__":
    main()
