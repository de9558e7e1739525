"""Experiment grids over coordinators x swarm sizes x inner iterations.

A grid expands to one cell per combination; every cell is run for a fixed
number of replications with deterministic, pairwise-distinct seeds, and the
per-cell quality is reported as the relative percentage of error

    RPE = (f_opt - f_avrg) / f_opt

where f_avrg is the mean best fitness over the replications.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .coordination import CoordinatorKind, PsoParams
from .engine import SwarmConfig, run_swarm
from .mkp import MkpInstance
from .orlib import load_orlib
from .sa import SaConfig


class ConfigError(ValueError):
    """Invalid experiment configuration."""


_COORDS = ("esa", "bco", "pso")


def rpe(f_opt: float, f_avrg: float) -> float:
    """Relative percentage of error, as a fraction."""
    if not f_opt > 0:
        raise ValueError("f_opt must be positive")
    return (f_opt - f_avrg) / f_opt


@dataclass(frozen=True)
class CellStats:
    benchmark: str
    coordinator: str
    swarm_size: int
    inner_iters: int
    replications: int
    rpe: float
    cpu_mean_s: float
    f_avrg: float
    f_opt: float
    best_found: float


@dataclass(frozen=True)
class ExperimentGrid:
    """Benchmark selection plus the cartesian experiment dimensions."""

    path: str
    problems: tuple[int, ...]                 # 1-based indices into the file
    coordinators: tuple[str, ...] = _COORDS
    swarm_sizes: tuple[int, ...] = (5, 10, 15, 20, 30, 40, 50)
    inner_iterations: tuple[int, ...] = (1,)
    replications: int = 50
    seed_base: int = 0
    generations: int = 300
    stop_at_optimum: bool = True
    sa: SaConfig = field(default_factory=SaConfig)
    pso_params: PsoParams = field(default_factory=PsoParams)
    optima: Mapping[int, float] = field(default_factory=dict)   # per-problem overrides

    def __post_init__(self):
        if not self.problems:
            raise ConfigError("no problems selected")
        if not self.coordinators:
            raise ConfigError("no coordinators selected")
        for c in self.coordinators:
            if c not in _COORDS:
                raise ConfigError(f"unknown coordinator {c!r}")
        if not self.swarm_sizes or any(s < 1 for s in self.swarm_sizes):
            raise ConfigError("swarm sizes must be positive")
        if not self.inner_iterations or any(i < 1 for i in self.inner_iterations):
            raise ConfigError("inner iteration counts must be positive")
        if self.replications < 1:
            raise ConfigError("replications must be positive")


def _coordinator(kind: str, params: PsoParams) -> CoordinatorKind:
    return CoordinatorKind.pso(params) if kind == "pso" else CoordinatorKind(kind)


def _load_problems(grid: ExperimentGrid) -> list[tuple[int, MkpInstance, float]]:
    bench = load_orlib(grid.path)
    out = []
    for k in grid.problems:
        if not 1 <= k <= len(bench.problems):
            raise ConfigError(
                f"problem {k} out of range; {grid.path} has {len(bench.problems)} problems"
            )
        inst = bench.problems[k - 1]
        f_opt = grid.optima.get(k, inst.known_optimum)
        if f_opt is None:
            raise ConfigError(
                f"no known optimum for {inst.name}; pass one explicitly to compute RPE"
            )
        out.append((k, inst, float(f_opt)))
    return out


def expand_cells(grid: ExperimentGrid) -> list[tuple[MkpInstance, float, str, int, int]]:
    """Deterministic cell ordering: (benchmark name, coordinator, size, inner)."""
    problems = _load_problems(grid)
    cells = [
        (inst, f_opt, coord, size, inner)
        for _, inst, f_opt in problems
        for coord in grid.coordinators
        for size in grid.swarm_sizes
        for inner in grid.inner_iterations
    ]
    cells.sort(key=lambda c: (c[0].name, c[2], c[3], c[4]))
    return cells


def replication_seeds(grid: ExperimentGrid, cell_index: int) -> list[int]:
    """Seeds for one cell: a contiguous block, so seeds are pairwise distinct
    within a cell and disjoint across cells."""
    base = grid.seed_base + cell_index * grid.replications
    return [base + r for r in range(grid.replications)]


def _cell_config(grid: ExperimentGrid, coord: str, size: int, inner: int, seed: int) -> SwarmConfig:
    return SwarmConfig(
        swarm_size=size,
        generations=grid.generations,
        sa=replace(grid.sa, inner_iterations=inner),
        coordinator=_coordinator(coord, grid.pso_params),
        seed=seed,
        stop_at_optimum=grid.stop_at_optimum,
    )


def _run_one(instance: MkpInstance, cfg: SwarmConfig) -> tuple[float, float]:
    result = run_swarm(instance, cfg)
    return result.best.fitness, result.wall_time


def run_grid(grid: ExperimentGrid, parallel_replications: int = 1) -> list[CellStats]:
    """Run every cell for ``grid.replications`` independent seeded runs.

    Cells and replication order are deterministic; with
    ``parallel_replications > 1`` individual runs execute on a process pool,
    which cannot change the statistics because every run is fully seeded.
    """
    cells = expand_cells(grid)
    tasks = []
    for ci, (inst, f_opt, coord, size, inner) in enumerate(cells):
        for seed in replication_seeds(grid, ci):
            tasks.append((ci, inst, _cell_config(grid, coord, size, inner, seed)))

    if parallel_replications > 1:
        with ProcessPoolExecutor(max_workers=parallel_replications) as pool:
            outcomes = list(pool.map(_run_one, [t[1] for t in tasks], [t[2] for t in tasks],
                                     chunksize=8))
    else:
        outcomes = [_run_one(inst, cfg) for _, inst, cfg in tasks]

    stats = []
    per_cell = grid.replications
    for ci, (inst, f_opt, coord, size, inner) in enumerate(cells):
        chunk = outcomes[ci * per_cell : (ci + 1) * per_cell]
        bests = np.array([b for b, _ in chunk])
        walls = np.array([w for _, w in chunk])
        f_avrg = float(bests.mean())
        stats.append(
            CellStats(
                benchmark=inst.name,
                coordinator=coord,
                swarm_size=size,
                inner_iters=inner,
                replications=per_cell,
                rpe=rpe(f_opt, f_avrg),
                cpu_mean_s=float(walls.mean()),
                f_avrg=f_avrg,
                f_opt=f_opt,
                best_found=float(bests.max()),
            )
        )
    return stats


def summarize_fig2(
    cells: Sequence[CellStats],
) -> list[tuple[str, int, str, float]]:
    """Average RPE across swarm sizes, grouped by
    (benchmark, inner iterations, coordinator). Plot-ready rows."""
    if not cells:
        raise ValueError("no cells to summarize")
    groups: dict[tuple[str, int, str], list[float]] = {}
    for c in cells:
        groups.setdefault((c.benchmark, c.inner_iters, c.coordinator), []).append(c.rpe)
    return [
        (bench_name, inner, coord, float(np.mean(vals)))
        for (bench_name, inner, coord), vals in sorted(groups.items())
    ]
