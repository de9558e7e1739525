"""Fast-track simulated annealing kernel run once per agent per generation.

The search stays inside the feasible region: a neighbor proposal flips up to
``max_flips`` bits and is resampled (fresh flip count and positions) when the
result would violate a constraint. Worsening moves are accepted with the
Metropolis probability exp(delta / t) under a geometric cooling schedule.
The best solution visited during the run is returned as the frozen state.

The hot loop is compiled with numba when available; the compiled path draws
from the same ``np.random.Generator`` in the same order as the pure-Python
composition of :func:`neighbor` and :func:`accept`, so both produce
bit-identical runs for a given stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

from .mkp import MkpInstance, Solution, _frozen


@dataclass(frozen=True)
class SaConfig:
    """Schedule and neighborhood parameters for one SA run.

    ``t_hot=None`` means "derive from the instance": 0.7x the smallest
    positive profit, so the cheapest worsening flip starts out accepted
    roughly a quarter of the time and the run stays local enough for the
    coordinators to matter. Resolved by :meth:`resolved_for` before a run.
    """

    outer_iterations: int = 200
    inner_iterations: int = 1
    t_hot: float | None = None
    t_frozen: float = 0.01
    max_flips: int = 3
    neighbor_retry_cap: int = 20

    def __post_init__(self):
        if self.outer_iterations < 2:
            raise ValueError("outer_iterations must be at least 2")
        if self.inner_iterations < 1:
            raise ValueError("inner_iterations must be positive")
        if self.max_flips < 1:
            raise ValueError("max_flips must be positive")
        if self.neighbor_retry_cap < 1:
            raise ValueError("neighbor_retry_cap must be positive")
        if not self.t_frozen > 0:
            raise ValueError("t_frozen must be positive")
        if self.t_hot is not None and not self.t_hot > self.t_frozen:
            raise ValueError("t_hot must exceed t_frozen")

    def resolved_for(self, instance: MkpInstance) -> "SaConfig":
        """Fill a concrete t_hot and clamp max_flips to the item count."""
        max_flips = min(self.max_flips, instance.n)
        if self.t_hot is not None:
            if max_flips == self.max_flips:
                return self
            return replace(self, max_flips=max_flips)
        positive = instance.profits[instance.profits > 0]
        scale = 0.7 * float(positive.min()) if positive.size else 0.0
        t_hot = scale if scale > self.t_frozen else self.t_frozen * 10.0
        return replace(self, t_hot=t_hot, max_flips=max_flips)


@dataclass(frozen=True)
class SaRunTrace:
    start_fitness: float
    end_fitness: float
    accepted_moves: int
    proposed_moves: int


def cooling_step(level: int, cfg: SaConfig) -> float:
    """Temperature at a schedule level: t_hot * alpha**level with
    alpha = (t_frozen / t_hot) ** (1 / (outer_iterations - 1))."""
    if cfg.t_hot is None:
        raise ValueError("cooling_step needs a concrete t_hot (use resolved_for)")
    if not 0 <= level < cfg.outer_iterations:
        raise ValueError(f"level {level} outside schedule of {cfg.outer_iterations} steps")
    alpha = (cfg.t_frozen / cfg.t_hot) ** (1.0 / (cfg.outer_iterations - 1))
    return cfg.t_hot * alpha**level


@lru_cache(maxsize=64)
def _schedule_array(t_hot: float, t_frozen: float, outer: int) -> np.ndarray:
    alpha = (t_frozen / t_hot) ** (1.0 / (outer - 1))
    temps = t_hot * alpha ** np.arange(outer, dtype=np.float64)
    temps.setflags(write=False)
    return temps


def cooling_schedule(cfg: SaConfig) -> np.ndarray:
    """All schedule temperatures, t(0) = t_hot down to t(last) = t_frozen."""
    if cfg.t_hot is None:
        raise ValueError("cooling_schedule needs a concrete t_hot (use resolved_for)")
    return _schedule_array(cfg.t_hot, cfg.t_frozen, cfg.outer_iterations)


def accept(delta: float, temperature: float, rho: float) -> bool:
    """Metropolis rule for maximization: improvements and lateral moves pass,
    worsening moves pass iff exp(delta / temperature) >= rho."""
    if not math.isfinite(delta):
        raise ValueError("delta must be finite")
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    if delta >= 0:
        return True
    return math.exp(delta / temperature) >= rho


def neighbor(
    current: Solution, instance: MkpInstance, cfg: SaConfig, rng: np.random.Generator
) -> Solution:
    """Sample a feasible neighbor of a feasible solution.

    Draws k uniformly from {1..max_flips} and flips k distinct uniform
    positions; infeasible results are resampled from scratch up to
    ``neighbor_retry_cap`` times. If every attempt is infeasible the current
    solution is returned unchanged.
    """
    n = instance.n
    if cfg.max_flips > n:
        raise ValueError(f"max_flips {cfg.max_flips} exceeds item count {n}")
    bits = current.bits
    loads = instance.weights @ bits
    for _ in range(cfg.neighbor_retry_cap + 1):
        k = int(rng.integers(1, cfg.max_flips + 1))
        pos: list[int] = []
        while len(pos) < k:
            j = int(rng.integers(0, n))
            if j not in pos:
                pos.append(j)
        cand = bits.copy()
        delta_loads = np.zeros(instance.m)
        for j in pos:
            sign = 1.0 - 2.0 * bits[j]
            delta_loads += sign * instance.weights[:, j]
            cand[j] = 1 - cand[j]
        if np.all(loads + delta_loads <= instance.capacities):
            return Solution(_frozen(cand), float(instance.profits @ cand))
    return current


if njit is not None:

    @njit(cache=True, nogil=True)
    def _sa_kernel(bits, loads, start_fit, profits, weights, caps, temps,
                   inner, max_flips, retry_cap, rng):
        # Mirrors neighbor() + accept() draw for draw; see module docstring.
        n = bits.shape[0]
        m = caps.shape[0]
        pos = np.empty(max_flips, np.int64)
        dl = np.empty(m, np.float64)
        cur_fit = start_fit
        best_bits = bits.copy()
        best_fit = cur_fit
        accepted = 0
        for lvl in range(temps.shape[0]):
            t = temps[lvl]
            for _ in range(inner):
                found = False
                k = 0
                dfit = 0.0
                for _attempt in range(retry_cap + 1):
                    k = int(rng.integers(1, max_flips + 1))
                    cnt = 0
                    while cnt < k:
                        j = int(rng.integers(0, n))
                        dup = False
                        for q in range(cnt):
                            if pos[q] == j:
                                dup = True
                                break
                        if not dup:
                            pos[cnt] = j
                            cnt += 1
                    ok = True
                    for i in range(m):
                        dli = 0.0
                        for q in range(k):
                            j = pos[q]
                            dli += (1.0 - 2.0 * bits[j]) * weights[i, j]
                        if loads[i] + dli > caps[i]:
                            ok = False
                            break
                        dl[i] = dli
                    if ok:
                        dfit = 0.0
                        for q in range(k):
                            j = pos[q]
                            dfit += (1.0 - 2.0 * bits[j]) * profits[j]
                        found = True
                        break
                rho = rng.random()
                if found:
                    if dfit >= 0.0 or np.exp(dfit / t) >= rho:
                        accepted += 1
                        for q in range(k):
                            j = pos[q]
                            bits[j] = 1 - bits[j]
                        for i in range(m):
                            loads[i] += dl[i]
                        cur_fit += dfit
                        if cur_fit > best_fit:
                            best_fit = cur_fit
                            for jj in range(n):
                                best_bits[jj] = bits[jj]
                else:
                    # unchanged fallback proposal, delta = 0: lateral accept
                    accepted += 1
        return best_bits, accepted


def _run_sa_reference(
    instance: MkpInstance, hot: Solution, cfg: SaConfig, rng: np.random.Generator
) -> tuple[Solution, SaRunTrace]:
    """Pure-Python composition of neighbor/accept/cooling_step; slow path,
    kept as the ground truth the kernel is tested against."""
    cur = hot
    best = hot
    accepted = 0
    for lvl in range(cfg.outer_iterations):
        t = cooling_step(lvl, cfg)
        for _ in range(cfg.inner_iterations):
            cand = neighbor(cur, instance, cfg, rng)
            rho = float(rng.random())
            if accept(cand.fitness - cur.fitness, t, rho):
                cur = cand
                accepted += 1
                if cur.fitness > best.fitness:
                    best = cur
    trace = SaRunTrace(
        start_fitness=hot.fitness,
        end_fitness=best.fitness,
        accepted_moves=accepted,
        proposed_moves=cfg.outer_iterations * cfg.inner_iterations,
    )
    return best, trace


def run_sa(
    instance: MkpInstance, hot: Solution, cfg: SaConfig, rng: np.random.Generator
) -> tuple[Solution, SaRunTrace]:
    """One annealing run from a feasible, evaluated hot solution.

    Returns the best solution visited (never worse than the input) and a
    trace of the run. Deterministic given the rng stream.
    """
    cfg = cfg.resolved_for(instance)
    bits = hot.bits.astype(np.int8)
    loads = instance.weights @ bits
    if np.any(loads > instance.capacities):
        raise ValueError("hot solution is infeasible")
    if njit is None:  # pragma: no cover - exercised only without numba
        return _run_sa_reference(instance, hot, cfg, rng)
    temps = cooling_schedule(cfg)
    best_bits, accepted = _sa_kernel(
        bits, loads, hot.fitness, instance.profits, instance.weights,
        instance.capacities, temps, cfg.inner_iterations, cfg.max_flips,
        cfg.neighbor_retry_cap, rng,
    )
    frozen = Solution(_frozen(best_bits), float(instance.profits @ best_bits))
    trace = SaRunTrace(
        start_fitness=hot.fitness,
        end_fitness=frozen.fitness,
        accepted_moves=int(accepted),
        proposed_moves=cfg.outer_iterations * cfg.inner_iterations,
    )
    return frozen, trace
