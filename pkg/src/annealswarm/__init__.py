"""Swarms of simulated-annealing agents with pluggable coordination,
applied to the multidimensional knapsack problem."""

from .bench import CellStats, ConfigError, ExperimentGrid, rpe, run_grid, summarize_fig2
from .coordination import (
    CoordinatorKind,
    PsoParams,
    PsoState,
    bco_coordinate,
    esa_coordinate,
    init_pso_state,
    pso_coordinate,
    pso_position_sample,
    pso_velocity_update,
)
from .engine import RunResult, SwarmConfig, init_swarm, run_generation, run_swarm
from .mkp import (
    MkpInstance,
    Solution,
    brute_force_optimum,
    evaluate,
    is_feasible,
    objective,
    pseudo_utilities,
    repair,
)
from .orlib import (
    BenchmarkFile,
    OrlibFormatError,
    bundled_mknap1_path,
    format_orlib,
    load_orlib,
    parse_orlib,
    render_table,
    write_results_csv,
)
from .sa import SaConfig, SaRunTrace, accept, cooling_schedule, cooling_step, neighbor, run_sa

__version__ = "0.1.0"

__all__ = [
    "BenchmarkFile",
    "CellStats",
    "ConfigError",
    "CoordinatorKind",
    "ExperimentGrid",
    "MkpInstance",
    "OrlibFormatError",
    "PsoParams",
    "PsoState",
    "RunResult",
    "SaConfig",
    "SaRunTrace",
    "Solution",
    "SwarmConfig",
    "accept",
    "bco_coordinate",
    "brute_force_optimum",
    "bundled_mknap1_path",
    "cooling_schedule",
    "cooling_step",
    "esa_coordinate",
    "evaluate",
    "format_orlib",
    "init_pso_state",
    "init_swarm",
    "is_feasible",
    "load_orlib",
    "neighbor",
    "objective",
    "parse_orlib",
    "pseudo_utilities",
    "pso_coordinate",
    "pso_position_sample",
    "pso_velocity_update",
    "render_table",
    "repair",
    "rpe",
    "run_generation",
    "run_grid",
    "run_sa",
    "run_swarm",
    "summarize_fig2",
    "write_results_csv",
]
