"""Command-line driver.

Two subcommands:

* ``solve``: one swarm run on one benchmark problem.
* ``bench``: a full experiment grid with replications, CSV output and an
  aligned console table.

Exit codes: 0 success, 2 configuration error, 3 input-file error.
A JSON config file may supply defaults for any long option (keys use
underscores, e.g. ``{"swarm_size": 20}``); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ConfigError, ExperimentGrid, run_grid, summarize_fig2
from .coordination import CoordinatorKind, PsoParams
from .engine import SwarmConfig, run_swarm
from .orlib import OrlibFormatError, load_orlib, render_table, write_results_csv
from .sa import SaConfig


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _optima_map(text: str) -> dict[int, float]:
    out = {}
    try:
        for part in text.split(","):
            if not part:
                continue
            k, v = part.split("=")
            out[int(k)] = float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated problem=value pairs, got {text!r}"
        )
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annealswarm",
        description="Swarms of simulated-annealing agents for the multidimensional knapsack problem",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="benchmark file in OR-Library mknap format")
    common.add_argument("--config", help="JSON file with default option values")
    common.add_argument("--generations", type=int, default=300)
    common.add_argument("--outer", type=int, default=200, help="SA temperature levels per run")
    common.add_argument("--t-hot", type=float, default=None, help="initial temperature (default: max profit)")
    common.add_argument("--t-frozen", type=float, default=0.01, help="final temperature")
    common.add_argument("--max-flips", type=int, default=3, help="neighborhood width")

    solve = sub.add_parser("solve", parents=[common], help="run one swarm on one problem")
    solve.add_argument("--problem", type=int, default=1, help="1-based problem index")
    solve.add_argument("--coordinator", choices=("esa", "bco", "pso"), default="pso")
    solve.add_argument("--swarm-size", type=int, default=20)
    solve.add_argument("--inner", type=int, default=1, help="moves per temperature level")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--stop-at-optimum", action="store_true")
    solve.add_argument("--threads", type=int, default=1)

    bench = sub.add_parser("bench", parents=[common], help="run an experiment grid")
    bench.add_argument("--problems", type=_int_list, default=(6, 7))
    bench.add_argument("--coordinators", type=_str_list, default=("esa", "bco", "pso"))
    bench.add_argument("--swarm-sizes", type=_int_list, default=(5, 10, 15, 20, 30, 40, 50))
    bench.add_argument("--inner", type=_int_list, default=(1,), dest="inner_list")
    bench.add_argument("--replications", type=int, default=50)
    bench.add_argument("--seed-base", type=int, default=0)
    bench.add_argument("--out", help="write the results CSV here")
    bench.add_argument("--fig2-out", help="write per-coordinator averaged RPE CSV here")
    bench.add_argument("--jobs", type=int, default=1, help="parallel replications")
    bench.add_argument("--optima", type=_optima_map, default={},
                       help="override unknown optima, e.g. 6=10618,7=16537")
    bench.add_argument("--no-stop-at-optimum", action="store_true")
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    # flags win over config-file values: install the file values as defaults
    if "--config" not in argv:
        return
    path = argv[argv.index("--config") + 1]
    values = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(values, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    for action in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
        known = {a.dest for a in action._actions}  # noqa: SLF001
        action.set_defaults(**{k: v for k, v in values.items() if k in known})


def _sa_config(args, inner: int) -> SaConfig:
    return SaConfig(
        outer_iterations=args.outer,
        inner_iterations=inner,
        t_hot=args.t_hot,
        t_frozen=args.t_frozen,
        max_flips=args.max_flips,
    )


def _cmd_solve(args) -> int:
    bench_file = load_orlib(args.file)
    if not 1 <= args.problem <= len(bench_file.problems):
        raise ConfigError(
            f"problem {args.problem} out of range; file has {len(bench_file.problems)} problems"
        )
    instance = bench_file.problems[args.problem - 1]
    coordinator = (
        CoordinatorKind.pso(PsoParams())
        if args.coordinator == "pso"
        else CoordinatorKind(args.coordinator)
    )
    cfg = SwarmConfig(
        swarm_size=args.swarm_size,
        generations=args.generations,
        sa=_sa_config(args, args.inner),
        coordinator=coordinator,
        seed=args.seed,
        stop_at_optimum=args.stop_at_optimum,
    )
    result = run_swarm(instance, cfg, threads=args.threads)
    print(f"instance       {instance.name} (n={instance.n}, m={instance.m})")
    print(f"coordinator    {args.coordinator}")
    print(f"best fitness   {result.best.fitness:g}")
    if instance.known_optimum is not None:
        gap = (instance.known_optimum - result.best.fitness) / instance.known_optimum
        print(f"optimum        {instance.known_optimum:g} (gap {gap:.5f})")
    print(f"found at gen   {result.best_generation}")
    print(f"generations    {result.generations_executed}")
    print(f"wall time      {result.wall_time:.2f}s")
    print("bits           " + "".join(str(int(b)) for b in result.best.bits))
    return 0


def _cmd_bench(args) -> int:
    grid = ExperimentGrid(
        path=args.file,
        problems=args.problems,
        coordinators=args.coordinators,
        swarm_sizes=args.swarm_sizes,
        inner_iterations=args.inner_list,
        replications=args.replications,
        seed_base=args.seed_base,
        generations=args.generations,
        stop_at_optimum=not args.no_stop_at_optimum,
        sa=_sa_config(args, inner=1),
        optima=args.optima,
    )
    cells = run_grid(grid, parallel_replications=args.jobs)
    print(render_table(cells))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_results_csv(cells, fh)
        print(f"wrote {args.out}")
    if args.fig2_out:
        with open(args.fig2_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("benchmark,inner_iters,coordinator,mean_rpe\n")
            for bench_name, inner, coord, mean_rpe in summarize_fig2(cells):
                fh.write(f"{bench_name},{inner},{coord},{mean_rpe:.5f}\n")
        print(f"wrote {args.fig2_out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, OrlibFormatError):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
