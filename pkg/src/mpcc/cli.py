"""Command-line interface: gen, solve, check, and bench subcommands.

Exit codes: 0 success, 2 bad command line (argparse), 3 unreadable or
malformed input file, 4 invalid instance or parameters, 5 infeasible
solution, 6 exact-solver budget exceeded, 1 other runtime failure.
"""

import argparse
import sys
from pathlib import Path
from time import perf_counter

from . import experiments
from .baselines import STATUS_OPTIMAL, ExactBudget, solve_exact, solve_nca
from .formats import (
    FormatError,
    instance_from_json,
    instance_to_json,
    solution_to_json,
    solution_violations,
    trace_to_jsonl,
)
from .model import validate_instance
from .mlr import solve_mlr

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_INFEASIBLE = 5
EXIT_BUDGET = 6

__all__ = [
    "main",
    "run",
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_USAGE",
    "EXIT_PARSE",
    "EXIT_VALIDATION",
    "EXIT_INFEASIBLE",
    "EXIT_BUDGET",
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpcc",
        description=(
            "Minimum-power capacitated cover toolkit: generate instances, "
            "solve them with mlr/nca/exact, check solutions, and run "
            "benchmark sweeps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--n", type=int, required=True, help="number of TDs")
    gen.add_argument("--m", type=int, required=True, help="number of APs")
    gen.add_argument("--k", type=int, required=True, help="AP capacity")
    gen.add_argument("--side", type=float, default=40.0, help="square side length")
    gen.add_argument("--c", type=float, default=1.0, help="power constant c")
    gen.add_argument("--alpha", type=float, default=2.0, help="attenuation factor")
    gen.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    gen.add_argument("--trial", type=int, default=0, help="trial index under the seed")
    gen.add_argument("--out", required=True, help="instance JSON path")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("--alg", choices=("mlr", "nca", "exact"), required=True)
    solve.add_argument("--in", dest="instance", required=True, help="instance JSON path")
    solve.add_argument("--out", required=True, help="solution JSON path")
    solve.add_argument("--trace", help="write the mlr iteration trace (JSON lines)")
    solve.add_argument("--max-nodes", type=int, default=ExactBudget.max_nodes,
                       help="exact-solver node budget")
    solve.add_argument("--max-seconds", type=float, default=ExactBudget.max_seconds,
                       help="exact-solver wall-clock budget")

    check = sub.add_parser("check", help="check a solution against an instance")
    check.add_argument("--instance", required=True)
    check.add_argument("--solution", required=True)

    bench = sub.add_parser("bench", help="run a benchmark sweep")
    source = bench.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", type=int, choices=(1, 2, 3, 4))
    source.add_argument("--config", help="JSON file with a list of config objects")
    bench.add_argument("--out-dir", required=True)
    bench.add_argument("--trials", type=int, help="override trials per config")
    bench.add_argument("--seed", type=int, help="override the base seed")
    bench.add_argument("--max-n", type=int, help="drop sweep points with n above this")
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _cmd_gen(args) -> int:
    cfg = experiments.ExperimentConfig(
        n=args.n, m=args.m, k=args.k, side=args.side,
        power_c=args.c, power_alpha=args.alpha, trials=1, seed=args.seed,
    )
    problems = experiments.config_violations(cfg)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_VALIDATION
    inst = experiments.generate_instance(cfg, args.trial)
    problems = validate_instance(inst)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_VALIDATION
    Path(args.out).write_text(instance_to_json(inst))
    print(f"seed={args.seed} trial={args.trial} n={args.n} m={args.m} "
          f"k={args.k} side={args.side:g} -> {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    if args.trace and args.alg != "mlr":
        print("error: --trace is only available for --alg mlr", file=sys.stderr)
        return EXIT_USAGE
    try:
        inst = instance_from_json(_read(args.instance))
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    problems = validate_instance(inst)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_VALIDATION

    trace = [] if args.trace else None
    if args.alg == "mlr":
        t0 = perf_counter()
        sol = solve_mlr(inst, trace=trace)
        wall_ms = (perf_counter() - t0) * 1e3
    elif args.alg == "nca":
        t0 = perf_counter()
        sol = solve_nca(inst)
        wall_ms = (perf_counter() - t0) * 1e3
    else:
        budget = ExactBudget(max_nodes=args.max_nodes, max_seconds=args.max_seconds)
        t0 = perf_counter()
        res = solve_exact(inst, budget)
        wall_ms = (perf_counter() - t0) * 1e3
        if res.status != STATUS_OPTIMAL:
            print(
                f"budget exceeded after {res.nodes_explored} nodes "
                f"({res.elapsed_seconds:.3f}s); no solution written",
                file=sys.stderr,
            )
            return EXIT_BUDGET
        sol = res.solution

    Path(args.out).write_text(solution_to_json(sol, inst))
    if trace is not None:
        Path(args.trace).write_text(trace_to_jsonl(trace))
    variance = experiments.utilization_variance(sol, inst)
    print(f"total_power={sol.total_power:.17g} wall_ms={wall_ms:.3f} "
          f"variance={variance:.17g}")
    return EXIT_OK


def _cmd_check(args) -> int:
    try:
        inst = instance_from_json(_read(args.instance))
        solution_text = _read(args.solution)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    problems = validate_instance(inst)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        violations = solution_violations(solution_text, inst)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return EXIT_INFEASIBLE
    print("ok")
    return EXIT_OK


def _parse_config_file(path: str) -> list[experiments.ExperimentConfig]:
    import json

    try:
        doc = json.loads(_read(path))
    except ValueError as exc:
        raise FormatError(f"invalid config file: {exc}") from exc
    if not isinstance(doc, list):
        raise FormatError("config file must hold a JSON list of config objects")
    configs = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise FormatError(f"config {i} is not an object")
        try:
            configs.append(
                experiments.ExperimentConfig(
                    n=entry["n"],
                    m=entry["m"],
                    k=entry["k"],
                    side=entry["side"],
                    power_c=entry.get("c", 1.0),
                    power_alpha=entry.get("alpha", 2.0),
                    trials=entry.get("trials", 50),
                    seed=entry.get("seed", experiments.DEFAULT_SEED),
                    algorithms=tuple(entry.get("algorithms", ("mlr", "nca"))),
                )
            )
        except KeyError as exc:
            raise FormatError(f"config {i} missing field {exc}") from exc
    return configs


def _cmd_bench(args) -> int:
    if args.preset is not None:
        series = args.preset
        configs = experiments.preset(series)
    else:
        series = "custom"
        try:
            configs = _parse_config_file(args.config)
        except FormatError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
    configs = experiments.truncate_sweep(configs, args.max_n)
    configs = experiments.override_configs(configs, trials=args.trials, seed=args.seed)
    if not configs:
        print("error: sweep is empty after truncation", file=sys.stderr)
        return EXIT_VALIDATION
    for cfg in configs:
        problems = experiments.config_violations(cfg)
        if problems:
            for p in problems:
                print(f"error: {p}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        experiments.run_sweep(configs, series, args.out_dir, progress=print)
    except experiments.ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"wrote {Path(args.out_dir) / 'results.csv'}")
    return EXIT_OK


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "gen": _cmd_gen,
        "solve": _cmd_solve,
        "check": _cmd_check,
        "bench": _cmd_bench,
    }[args.command]
    return handler(args)


def main() -> None:
    raise SystemExit(run())
