"""Inter-generation coordinators mapping frozen solutions to next hot states.

Three strategies:

* ESA: every agent takes its own frozen solution forward (identity);
  diversification comes from the per-generation temperature reheat.
* BCO: the global best is broadcast to every agent.
* PSO: binary particle swarm. Velocities follow

      v_ik <- delta * (w * v_ik + c1*r1*(y_ik - x_ik) + c2*r2*(g_k - x_ik))

  clamped to [-v_max, +v_max], with the inertia weight w decaying by the
  factor beta each update. Positions are sampled through a sigmoid: bit k is
  set with probability 1 / (1 + exp(-v_ik)), then repaired to feasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .mkp import MkpInstance, Solution, repair

_KINDS = ("esa", "bco", "pso")


@dataclass(frozen=True)
class PsoParams:
    # beta = 1 keeps velocities persistent: with decay, consensus dimensions
    # drift to v = 0 where the sigmoid resamples them as fair coins, and the
    # swarm degenerates into random restarts.
    c1: float = 1.0        # cognitive learning factor
    c2: float = 1.0        # social learning factor
    w0: float = 1.0        # initial inertia weight
    beta: float = 1.0      # inertia decrement factor per generation
    delta: float = 1.0     # constriction factor
    v_max: float = 4.0     # velocity clamp magnitude

    def __post_init__(self):
        vals = (self.c1, self.c2, self.w0, self.beta, self.delta, self.v_max)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("PSO parameters must be finite")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("learning factors must be non-negative")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must be in (0, 1]")
        if self.w0 <= 0 or self.delta <= 0 or self.v_max <= 0:
            raise ValueError("w0, delta and v_max must be positive")


@dataclass
class PsoState:
    """PSO memory carried across generations."""

    velocities: np.ndarray            # (N, n), within [-v_max, +v_max]
    personal_bests: list[Solution]    # one per agent
    global_best: Solution
    inertia: float


@dataclass(frozen=True)
class CoordinatorKind:
    """Tagged choice of coordinator; carries PSO parameters when kind is 'pso'."""

    kind: str = "esa"
    pso_params: PsoParams | None = None
    bco_best_of_generation: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "pso" and self.pso_params is None:
            object.__setattr__(self, "pso_params", PsoParams())
        if self.kind != "pso" and self.pso_params is not None:
            raise ValueError("pso_params only apply to the pso coordinator")

    @classmethod
    def esa(cls) -> "CoordinatorKind":
        return cls("esa")

    @classmethod
    def bco(cls, best_of_generation: bool = False) -> "CoordinatorKind":
        return cls("bco", bco_best_of_generation=best_of_generation)

    @classmethod
    def pso(cls, params: PsoParams | None = None) -> "CoordinatorKind":
        return cls("pso", pso_params=params or PsoParams())


def esa_coordinate(frozen: Sequence[Solution]) -> list[Solution]:
    """Identity pass-through: each agent keeps its frozen solution."""
    if not frozen:
        raise ValueError("empty frozen pool")
    return list(frozen)


def bco_coordinate(frozen: Sequence[Solution], global_best: Solution) -> list[Solution]:
    """Broadcast the global best to every agent."""
    if not frozen:
        raise ValueError("empty frozen pool")
    if global_best.fitness < max(s.fitness for s in frozen):
        raise ValueError("global best is worse than the frozen pool maximum")
    return [global_best] * len(frozen)


def init_pso_state(
    frozen: Sequence[Solution], params: PsoParams, rng: np.random.Generator
) -> PsoState:
    """Fresh state at the first coordination: velocities uniform in
    [-v_max, +v_max], personal bests seeded with the frozen pool."""
    if not frozen:
        raise ValueError("empty frozen pool")
    n = frozen[0].bits.size
    velocities = rng.uniform(-params.v_max, params.v_max, size=(len(frozen), n))
    best = frozen[int(np.argmax([s.fitness for s in frozen]))]
    return PsoState(velocities, list(frozen), best, params.w0)


def _position_matrix(pool: Sequence[Solution]) -> np.ndarray:
    return np.stack([s.bits for s in pool]).astype(np.float64)


def pso_velocity_update(
    state: PsoState,
    frozen: Sequence[Solution],
    params: PsoParams,
    rng: np.random.Generator,
) -> PsoState:
    """One velocity step against the frozen positions; clamps to v_max and
    decays the inertia weight by beta."""
    x = _position_matrix(frozen)
    y = _position_matrix(state.personal_bests)
    if state.velocities.shape != x.shape or y.shape != x.shape:
        raise ValueError("velocities, frozen pool and personal bests disagree in shape")
    g = state.global_best.bits.astype(np.float64)
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    v = params.delta * (
        state.inertia * state.velocities
        + params.c1 * r1 * (y - x)
        + params.c2 * r2 * (g[None, :] - x)
    )
    np.clip(v, -params.v_max, params.v_max, out=v)
    return PsoState(v, state.personal_bests, state.global_best, state.inertia * params.beta)


def pso_position_sample(velocities: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample binary positions: bit = 1 iff u < 1 / (1 + exp(-v))."""
    v = np.asarray(velocities, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("velocities must be finite")
    s = 1.0 / (1.0 + np.exp(-v))
    return (rng.random(v.shape) < s).astype(np.int8)


def pso_coordinate(
    state: PsoState,
    frozen: Sequence[Solution],
    params: PsoParams,
    instance: MkpInstance,
    rng: np.random.Generator,
) -> tuple[list[Solution], PsoState]:
    """Full PSO step: refresh personal/global bests from the frozen pool,
    update velocities, sample positions, repair to feasibility."""
    if len(frozen) != len(state.personal_bests):
        raise ValueError("frozen pool size does not match PSO state")
    pb = list(state.personal_bests)
    for i, sol in enumerate(frozen):
        if sol.fitness > pb[i].fitness:
            pb[i] = sol
    gb = state.global_best
    for sol in pb:
        if sol.fitness > gb.fitness:
            gb = sol
    updated = pso_velocity_update(
        PsoState(state.velocities, pb, gb, state.inertia), frozen, params, rng
    )
    sampled = pso_position_sample(updated.velocities, rng)
    pool = [repair(instance, row) for row in sampled]
    return pool, updated
