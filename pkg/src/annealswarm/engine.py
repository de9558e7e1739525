"""Generation loop: N annealing agents, a pool barrier, and a coordinator.

Each generation every agent runs one SA pass over its hot solution (agents
are independent and may run on a thread pool; results are collected in agent
index order so the outcome never depends on scheduling). The frozen pool is
handed to the configured coordinator, which produces the next hot pool.

Reproducibility: a master seed is split into N+1 independent streams via
``np.random.SeedSequence.spawn`` - one per agent plus one for the
coordinator - so a run is bit-identical for a given seed regardless of how
many threads execute the agents.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .coordination import (
    CoordinatorKind,
    PsoState,
    bco_coordinate,
    esa_coordinate,
    init_pso_state,
    pso_coordinate,
)
from .mkp import MkpInstance, Solution, repair
from .sa import SaConfig, run_sa


@dataclass(frozen=True)
class SwarmConfig:
    swarm_size: int
    generations: int = 300
    sa: SaConfig = field(default_factory=SaConfig)
    coordinator: CoordinatorKind = field(default_factory=CoordinatorKind.esa)
    seed: int = 0
    stop_at_optimum: bool = False

    def __post_init__(self):
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be positive")
        if self.generations < 1:
            raise ValueError("generations must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass
class CoordinatorState:
    """Mutable cross-generation coordinator memory."""

    best_so_far: Solution
    rng: np.random.Generator
    pso: PsoState | None = None


@dataclass(frozen=True)
class RunResult:
    best: Solution
    best_generation: int            # index into fitness_history
    fitness_history: np.ndarray     # (generations_executed, swarm_size) frozen-pool fitnesses
    wall_time: float
    generations_executed: int


def init_swarm(
    instance: MkpInstance, cfg: SwarmConfig
) -> tuple[list[Solution], list[np.random.Generator]]:
    """Initial feasible pool plus N+1 random streams.

    ``streams[i]`` drives agent i; ``streams[-1]`` is the coordinator stream.
    Initial solutions are uniform random bit vectors repaired to feasibility.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.swarm_size + 1)
    streams = [np.random.default_rng(c) for c in children]
    pool = []
    for i in range(cfg.swarm_size):
        bits = (streams[i].random(instance.n) < 0.5).astype(np.int8)
        pool.append(repair(instance, bits))
    return pool, streams


def _run_agents(instance, pool, agent_streams, sa_cfg, executor):
    if executor is None:
        return [
            run_sa(instance, sol, sa_cfg, agent_streams[i])[0]
            for i, sol in enumerate(pool)
        ]
    futures = [
        executor.submit(run_sa, instance, sol, sa_cfg, agent_streams[i])
        for i, sol in enumerate(pool)
    ]
    return [f.result()[0] for f in futures]


def run_generation(
    instance: MkpInstance,
    pool: list[Solution],
    agent_streams: list[np.random.Generator],
    coordinator_state: CoordinatorState,
    cfg: SwarmConfig,
    executor: ThreadPoolExecutor | None = None,
) -> tuple[list[Solution], CoordinatorState, np.ndarray]:
    """One generation: anneal every agent, pool the frozen solutions, update
    the best-so-far, and apply the coordinator. Returns the next hot pool,
    the updated coordinator state, and the frozen-pool fitness vector."""
    frozen = _run_agents(instance, pool, agent_streams, cfg.sa, executor)
    fits = np.array([s.fitness for s in frozen])
    gen_best = frozen[int(np.argmax(fits))]
    if gen_best.fitness > coordinator_state.best_so_far.fitness:
        coordinator_state.best_so_far = gen_best

    kind = cfg.coordinator.kind
    if kind == "esa":
        next_pool = esa_coordinate(frozen)
    elif kind == "bco":
        broadcast = (
            gen_best
            if cfg.coordinator.bco_best_of_generation
            else coordinator_state.best_so_far
        )
        next_pool = bco_coordinate(frozen, broadcast)
    else:
        params = cfg.coordinator.pso_params
        if coordinator_state.pso is None:
            coordinator_state.pso = init_pso_state(frozen, params, coordinator_state.rng)
        next_pool, coordinator_state.pso = pso_coordinate(
            coordinator_state.pso, frozen, params, instance, coordinator_state.rng
        )
    return next_pool, coordinator_state, fits


def run_swarm(instance: MkpInstance, cfg: SwarmConfig, threads: int = 1) -> RunResult:
    """Run up to ``cfg.generations`` generations and return the best state
    ever pooled.

    With ``stop_at_optimum`` and a known optimum on the instance, the loop
    exits as soon as the best fitness reaches it. ``threads`` only controls
    how agent runs are executed; it never changes the result.
    """
    t0 = time.perf_counter()
    cfg = replace(cfg, sa=cfg.sa.resolved_for(instance))
    pool, streams = init_swarm(instance, cfg)
    state = CoordinatorState(
        best_so_far=pool[int(np.argmax([s.fitness for s in pool]))],
        rng=streams[-1],
    )
    target = None
    if cfg.stop_at_optimum and instance.known_optimum is not None:
        target = instance.known_optimum - 1e-9 * max(1.0, instance.known_optimum)

    history = []
    best = state.best_so_far
    best_generation = 0
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for gen in range(cfg.generations):
            pool, state, fits = run_generation(
                instance, pool, streams, state, cfg, executor
            )
            history.append(fits)
            if state.best_so_far.fitness > best.fitness:
                best = state.best_so_far
                best_generation = gen
            if target is not None and best.fitness >= target:
                break
    finally:
        if executor is not None:
            executor.shutdown()
    return RunResult(
        best=best,
        best_generation=best_generation,
        fitness_history=np.array(history),
        wall_time=time.perf_counter() - t0,
        generations_executed=len(history),
    )
