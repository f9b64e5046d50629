#!/usr/bin/env python3
"""Soft-trend report for the TD-count sweep (preset 1).

Prints whether the mean MLR total power decreases between the middle and
the top of the sweep while the area stays fixed, which tends to happen
once the layout gets dense.  The direction depends on the random draws,
so this is reported rather than asserted anywhere.
"""

import argparse

from mpcc import experiments


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    configs = experiments.override_configs(
        experiments.preset(1), trials=args.trials, seed=args.seed
    )
    points = {}
    for cfg in configs:
        report = experiments.run_experiment(cfg)
        mean = report.summary["mlr"].mean_total_power
        points[cfg.n] = mean
        print(f"n={cfg.n:>4} m={cfg.m:>3}  mlr_mean_power={mean:.4f}")

    lo, hi = 100, max(points)
    if lo in points and points[hi] < points[lo]:
        print(f"\nmean MLR power decreased from n={lo} ({points[lo]:.4f}) "
              f"to n={hi} ({points[hi]:.4f}) over {args.trials} trials")
    else:
        print(f"\nmean MLR power did not decrease from n={lo} to n={hi} "
              f"over {args.trials} trials")


if __name__ == "__main__":
    main()
