"""0-1 knapsack over additive state values and the max-min reduction.

Values are reals and costs are positive integers, so the dynamic program is
indexed by budget only and needs no value scaling.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from .errors import DegenerateModelError, DimensionError, ParameterError, ResourceLimitError
from .mobility import Instance, Placement, RewardProfile

__all__ = [
    "KnapsackInput",
    "MnkInstance",
    "knapsack_dp",
    "knapsack_greedy",
    "reduce_to_mnk",
    "mnk_brute_force",
    "subset_value",
]


def subset_value(values: np.ndarray, members) -> float:
    """Sum of ``values`` over ``members``.

    Every score in the package goes through this helper so that a set and
    its own reference value always sum in the same order.
    """
    members = list(members)
    if not members:
        return 0.0
    return float(np.sum(values[members]))


def _check_costs(costs: np.ndarray, budget: int, n: int):
    if costs.shape[0] != n:
        raise DimensionError(f"{costs.shape[0]} costs for {n} items")
    if n and costs.min() < 1:
        raise ParameterError("costs must be integers >= 1")
    if budget < 0:
        raise ParameterError("budget must be non-negative")


@dataclass(frozen=True, eq=False)
class KnapsackInput:
    values: np.ndarray
    costs: np.ndarray
    budget: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        costs = np.asarray(self.costs, dtype=np.int64).reshape(-1)
        _check_costs(costs, int(self.budget), values.shape[0])
        if values.size and values.min() < 0:
            raise ParameterError("values must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "budget", int(self.budget))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class MnkInstance:
    """Max-min 0-1 knapsack: one row of item values per scenario."""

    scenarios: np.ndarray
    costs: np.ndarray
    budget: int

    def __post_init__(self):
        sc = np.array(self.scenarios, dtype=np.float64, ndmin=2)
        costs = np.asarray(self.costs, dtype=np.int64).reshape(-1)
        _check_costs(costs, int(self.budget), sc.shape[1])
        object.__setattr__(self, "scenarios", sc)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "budget", int(self.budget))

    def to_dict(self) -> dict:
        return {
            "n": int(self.scenarios.shape[1]),
            "scenarios": self.scenarios.tolist(),
            "costs": self.costs.tolist(),
            "budget": self.budget,
        }


def knapsack_dp(inp: KnapsackInput) -> Tuple[Placement, float]:
    """Exact 0-1 knapsack by the ``(n+1) x (L+1)`` table, ``O(nL)``.

    On equal table values the entry without the current item is kept, so
    among optimal sets the one favouring lower indices wins.
    """
    n, L = inp.n, inp.budget
    best = np.zeros(L + 1)
    take = np.zeros((n, L + 1), dtype=bool)
    for i in range(n):
        c = int(inp.costs[i])
        if c > L:
            continue
        cand = best[: L + 1 - c] + inp.values[i]
        better = cand > best[c:]
        take[i, c:] = better
        best[c:] = np.where(better, cand, best[c:])
    members = []
    j = L
    for i in range(n - 1, -1, -1):
        if take[i, j]:
            members.append(i)
            j -= int(inp.costs[i])
    p = Placement.from_members(members, n, inp.costs)
    return p, subset_value(inp.values, p.members)


def knapsack_greedy(inp: KnapsackInput) -> Tuple[Placement, float]:
    """Density-ordered greedy, corrected by the best single affordable item.

    Items are scanned by ``value / cost`` (ties to the lower index); any item
    that no longer fits is skipped.  Returning the better of that run and
    the most valuable affordable singleton guarantees half the optimum.
    """
    n, L = inp.n, inp.budget
    v, c = inp.values, inp.costs
    order = sorted(range(n), key=lambda s: (-v[s] / c[s], s))
    chosen, spent = [], 0
    for s in order:
        if v[s] <= 0:
            break
        if spent + c[s] <= L:
            chosen.append(s)
            spent += int(c[s])
    run = Placement.from_members(chosen, n, c)
    run_value = subset_value(v, run.members)

    affordable = [s for s in range(n) if c[s] <= L and v[s] > 0]
    if affordable:
        single = max(affordable, key=lambda s: (v[s], -s))
        if v[single] > run_value:
            return Placement.from_members([single], n, c), float(v[single])
    return run, run_value


def reduce_to_mnk(instance: Instance, profile: RewardProfile) -> MnkInstance:
    """Max-min knapsack whose scenario ``i`` scores item ``s`` by
    ``F({s}|pi_i) / F(S*_i|pi_i)``; its optimum coincides with the robust one."""
    if profile.denominators is None:
        raise ParameterError("profile denominators must be computed first")
    if profile.n != instance.n:
        raise DimensionError("profile and instance disagree on n")
    zero = np.flatnonzero(profile.denominators <= 0)
    if zero.size:
        raise DegenerateModelError(f"models {zero.tolist()} have zero optimal reward")
    scenarios = profile.values / profile.denominators[:, None]
    return MnkInstance(scenarios, instance.costs, instance.budget)


def mnk_brute_force(mnk: MnkInstance, max_items: int = 20) -> Tuple[Placement, float]:
    """Exhaustive max-min knapsack; ties go to lower cost, then lexicographic."""
    X, n = mnk.scenarios.shape
    if n > max_items:
        raise ResourceLimitError(f"n={n} exceeds enumeration cap {max_items}")
    best_key, best_set = None, ()
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            cost = int(sum(mnk.costs[s] for s in subset))
            if cost > mnk.budget:
                continue
            score = min(subset_value(mnk.scenarios[x], subset) for x in range(X))
            key = (-score, cost, subset)
            if best_key is None or key < best_key:
                best_key, best_set = key, subset
    return Placement.from_members(best_set, n, mnk.costs), -best_key[0]
