"""Multidimensional knapsack model.

Instances are immutable value holders (profits, constraint matrix,
capacities); solutions are binary vectors with a cached objective value.
Besides objective evaluation and feasibility checking, the module provides
a deterministic pseudo-utility repair operator and an exhaustive optimum
for small instances, used as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    njit = None

BRUTE_FORCE_MAX_ITEMS = 24


@dataclass(frozen=True, eq=False)
class MkpInstance:
    """One knapsack problem: maximize profits @ x subject to weights @ x <= capacities.

    All data is non-negative, so the all-zero vector is always feasible.
    Arrays are converted to read-only float64 on construction; instances are
    safe to share across threads.
    """

    profits: np.ndarray        # (n,)
    weights: np.ndarray        # (m, n), constraint-major
    capacities: np.ndarray     # (m,)
    known_optimum: float | None = None
    name: str = ""

    def __post_init__(self):
        p = np.ascontiguousarray(self.profits, dtype=np.float64)
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        b = np.ascontiguousarray(self.capacities, dtype=np.float64)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("profits must be a non-empty 1-d sequence")
        if b.ndim != 1 or b.size < 1:
            raise ValueError("capacities must be a non-empty 1-d sequence")
        if w.shape != (b.size, p.size):
            raise ValueError(
                f"weights must have shape (m, n) = ({b.size}, {p.size}), got {w.shape}"
            )
        if np.any(p < 0) or np.any(w < 0) or np.any(b < 0):
            raise ValueError("profits, weights and capacities must be non-negative")
        if self.known_optimum is not None and not self.known_optimum > 0:
            object.__setattr__(self, "known_optimum", None)
        for a in (p, w, b):
            a.setflags(write=False)
        object.__setattr__(self, "profits", p)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "capacities", b)

    @property
    def n(self) -> int:
        return self.profits.size

    @property
    def m(self) -> int:
        return self.capacities.size


@dataclass(frozen=True, eq=False)
class Solution:
    """A binary decision vector plus its cached objective value."""

    bits: np.ndarray   # (n,) int8, read-only
    fitness: float


def _as_bits(instance: MkpInstance, bits) -> np.ndarray:
    x = np.ascontiguousarray(bits, dtype=np.int8)
    if x.ndim != 1 or x.size != instance.n:
        raise ValueError(f"bit vector must have length {instance.n}, got shape {x.shape}")
    return x


def _frozen(bits: np.ndarray) -> np.ndarray:
    bits.setflags(write=False)
    return bits


def objective(instance: MkpInstance, bits) -> float:
    """Total profit of the selected items. No feasibility check."""
    x = _as_bits(instance, bits)
    return float(instance.profits @ x)


def is_feasible(instance: MkpInstance, bits) -> bool:
    """True iff every constraint row load is within its capacity."""
    x = _as_bits(instance, bits)
    return bool(np.all(instance.weights @ x <= instance.capacities))


def evaluate(instance: MkpInstance, bits) -> Solution:
    """Wrap a bit vector as an evaluated Solution."""
    x = _as_bits(instance, bits).copy()
    return Solution(_frozen(x), float(instance.profits @ x))


def pseudo_utilities(instance: MkpInstance) -> np.ndarray:
    """Profit per unit of aggregate capacity-normalized weight, per item.

    Items that load no constraint get +inf (dropped last, re-added first);
    items that can never fit (positive weight against a zero capacity) get 0.
    """
    w, b = instance.weights, instance.capacities
    with np.errstate(divide="ignore", invalid="ignore"):
        norm = np.where(w > 0, w / b[:, None], 0.0).sum(axis=0)
        return np.where(norm > 0, instance.profits / norm, np.inf)


if njit is not None:

    @njit(cache=True, nogil=True)
    def _repair_kernel(x, loads, weights, caps, asc, desc):
        m = caps.shape[0]
        for t in range(asc.shape[0]):
            ok = True
            for i in range(m):
                if loads[i] > caps[i]:
                    ok = False
                    break
            if ok:
                break
            j = asc[t]
            if x[j] == 1:
                x[j] = 0
                for i in range(m):
                    loads[i] -= weights[i, j]
        for t in range(desc.shape[0]):
            j = desc[t]
            if x[j] == 0:
                ok = True
                for i in range(m):
                    if loads[i] + weights[i, j] > caps[i]:
                        ok = False
                        break
                if ok:
                    x[j] = 1
                    for i in range(m):
                        loads[i] += weights[i, j]


def _repair_python(x, loads, weights, caps, asc, desc):
    for j in asc:
        if np.all(loads <= caps):
            break
        if x[j]:
            x[j] = 0
            loads -= weights[:, j]
    for j in desc:
        if not x[j] and np.all(loads + weights[:, j] <= caps):
            x[j] = 1
            loads += weights[:, j]


def repair(instance: MkpInstance, bits) -> Solution:
    """Make a bit vector feasible.

    Feasible input is returned unchanged. Otherwise set items are dropped in
    increasing pseudo-utility order (ties to the lower index) until every
    constraint holds, then a greedy pass re-adds, in decreasing pseudo-utility
    order, any item that keeps the vector feasible. Deterministic; always
    terminates because the all-zero vector is feasible.
    """
    x = _as_bits(instance, bits).copy()
    loads = instance.weights @ x
    if np.all(loads <= instance.capacities):
        return Solution(_frozen(x), float(instance.profits @ x))
    util = pseudo_utilities(instance)
    idx = np.arange(instance.n)
    asc = np.lexsort((idx, util))
    desc = np.lexsort((idx, -util))
    fn = _repair_kernel if njit is not None else _repair_python
    fn(x, loads, instance.weights, instance.capacities, asc, desc)
    return Solution(_frozen(x), float(instance.profits @ x))


def brute_force_optimum(instance: MkpInstance) -> Solution:
    """Exhaustive optimum by enumerating all 2^n vectors; oracle for tests.

    Ties are broken toward the lexicographically smallest bit vector.
    Refuses instances with n above BRUTE_FORCE_MAX_ITEMS.
    """
    n = instance.n
    if n > BRUTE_FORCE_MAX_ITEMS:
        raise ValueError(
            f"brute force is limited to n <= {BRUTE_FORCE_MAX_ITEMS} items, got n = {n}"
        )
    # Bit j of the code is x_j (MSB first), so numeric code order is
    # lexicographic order on vectors and the first maximum wins ties.
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    total = 1 << n
    chunk = 1 << 16
    best_fit = -1.0
    best_code = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        fits = bits @ instance.profits
        feas = np.all(bits @ instance.weights.T <= instance.capacities, axis=1)
        fits[~feas] = -1.0
        k = int(np.argmax(fits))
        if fits[k] > best_fit:
            best_fit = fits[k]
            best_code = start + k
    x = ((best_code >> shifts) & np.uint64(1)).astype(np.int8)
    return Solution(_frozen(x), float(instance.profits @ x))
