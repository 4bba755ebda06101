"""Robust reward placement solvers.

All solvers score a placement by its worst-case ratio

    min_i  F(S | pi_i) / F(S*_i | pi_i)

where ``S*_i`` is the best placement within budget for model ``i`` alone.
They consume a :class:`~reward_placement.mobility.RewardProfile` whose
denominators were filled by :func:`optimal_per_model`; by additivity every
reward evaluation is then a sum over the profile's columns.

A model whose optimal reward is zero constrains nothing: its ratio is taken
as 1 for every placement and it is left out of the minimum.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .knapsack import KnapsackInput, knapsack_dp, knapsack_greedy, subset_value
from .mobility import Instance, Placement, RewardProfile

__all__ = [
    "SaturateParams",
    "SolveReport",
    "DpTable",
    "REPORT_COLUMNS",
    "ALGORITHMS",
    "optimal_per_model",
    "objective",
    "psi_saturate",
    "all_greedy",
    "myopic",
    "bws",
    "dp_rrp",
    "dp_rrp_table",
    "brute_force",
    "bicriteria_beta",
    "solve",
]

GAIN_TOL = 1e-12
DEFAULT_DP_CELLS = 500_000_000
DEFAULT_BRUTE_FORCE_CAP = 20

ORACLES = ("exact-dp", "greedy")


@dataclass(frozen=True)
class SaturateParams:
    """Precision ``epsilon``, budget inflation ``beta`` and the inner oracle
    used for the per-model optima (``"exact-dp"`` or ``"greedy"``)."""

    epsilon: float = 0.01
    beta: float = 1.0
    inner_oracle: str = "exact-dp"

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ParameterError(f"epsilon {self.epsilon} outside (0, 1]")
        if self.beta < 1.0:
            raise ParameterError(f"beta {self.beta} < 1")
        if self.inner_oracle not in ORACLES:
            raise ParameterError(f"unknown inner oracle {self.inner_oracle!r}")


def bicriteria_beta(num_settings: int, epsilon: float) -> float:
    """Budget inflation ``1 + ln(3 |Pi| / epsilon)`` that buys an additive
    ``epsilon`` guarantee."""
    return 1.0 + math.log(3.0 * num_settings / epsilon)


REPORT_COLUMNS = (
    "algorithm", "n", "num_settings", "K", "L", "beta", "epsilon",
    "score", "budget_used", "wall_time_ms",
)


@dataclass(frozen=True, eq=False)
class SolveReport:
    placement: Optional[Placement]
    score: float
    per_model_ratio: np.ndarray
    algorithm: str
    wall_time: float
    budget_used: int
    flags: Tuple[str, ...] = ()
    beta: Optional[float] = None
    epsilon: Optional[float] = None

    @property
    def regret(self) -> np.ndarray:
        """Per-model regret ratio ``1 - ratio``."""
        return 1.0 - self.per_model_ratio

    def as_row(self, instance: Instance) -> dict:
        return {
            "algorithm": self.algorithm,
            "n": instance.n,
            "num_settings": instance.num_settings,
            "K": instance.horizon,
            "L": instance.budget,
            "beta": "" if self.beta is None else repr(float(self.beta)),
            "epsilon": "" if self.epsilon is None else repr(float(self.epsilon)),
            "score": repr(float(self.score)),
            "budget_used": self.budget_used,
            "wall_time_ms": f"{self.wall_time * 1e3:.3f}",
        }

    @classmethod
    def from_row(cls, row: dict) -> "SolveReport":
        """Rebuild the scalar part of a report from a CSV row.

        Placement members and per-model ratios are not part of the row.
        """
        def opt(key):
            v = row.get(key, "")
            return float(v) if v not in ("", None) else None

        time_ms = row.get("wall_time_ms", row.get("time_ms", "0"))
        return cls(
            placement=None,
            score=float(row["score"]),
            per_model_ratio=np.zeros(0),
            algorithm=row["algorithm"],
            wall_time=float(time_ms) / 1e3,
            budget_used=int(row["budget_used"]),
            beta=opt("beta"),
            epsilon=opt("epsilon"),
        )


def optimal_per_model(instance: Instance, profile: RewardProfile, oracle: str = "exact-dp"):
    """Solve the single-model knapsack for every model.

    Returns the profile with ``denominators`` set and the list of per-model
    optimal placements.  ``oracle="greedy"`` uses the half-approximate
    density greedy instead of the exact table.
    """
    if oracle not in ORACLES:
        raise ParameterError(f"unknown oracle {oracle!r}")
    if profile.n != instance.n or profile.num_settings != instance.num_settings:
        raise ParameterError("profile does not match instance")
    solve_one = knapsack_dp if oracle == "exact-dp" else knapsack_greedy
    placements, denominators = [], np.empty(profile.num_settings)
    for i in range(profile.num_settings):
        p, _ = solve_one(KnapsackInput(profile.values[i], instance.costs, instance.budget))
        placements.append(p)
        denominators[i] = subset_value(profile.values[i], p.members)
    prof = profile.with_denominators(denominators, tuple(p.members for p in placements), oracle)
    return prof, placements


def _with_denominators(instance, profile, oracle=None) -> RewardProfile:
    stale = oracle is not None and (profile.oracle != oracle or profile.optimal is None)
    if profile.denominators is None or stale:
        profile, _ = optimal_per_model(instance, profile, oracle or "exact-dp")
    return profile


def objective(instance: Instance, profile: RewardProfile, p) -> Tuple[float, np.ndarray]:
    """Worst-case ratio of ``p`` and the per-model ratios behind it."""
    if profile.denominators is None:
        raise ParameterError("profile denominators must be computed first")
    members = list(p.members if isinstance(p, Placement) else sorted(set(p)))
    ratios = np.ones(profile.num_settings)
    for i in range(profile.num_settings):
        d = profile.denominators[i]
        if d > 0:
            ratios[i] = subset_value(profile.values[i], members) / d
    active = ~profile.degenerate
    score = float(ratios[active].min()) if active.any() else 1.0
    return score, ratios


def _report(instance, profile, members, algorithm, t0, flags=(), beta=None, epsilon=None) -> SolveReport:
    elapsed = time.perf_counter() - t0
    p = instance.placement(members)
    score, ratios = objective(instance, profile, p)
    flags = tuple(flags)
    if profile.degenerate.any():
        flags += ("degenerate-models",)
    return SolveReport(p, score, ratios, algorithm, elapsed, p.cost, flags, beta, epsilon)


# -- saturation -------------------------------------------------------------

def _saturate_once(G, costs, eta, num_settings, epsilon, n_degenerate):
    """Greedy cover of the truncated sum ``sum_i min(eta, ratio_i)``."""
    A, n = G.shape
    r = np.zeros(A)
    chosen = np.zeros(n, dtype=bool)
    members = []
    target = eta * num_settings - eta * epsilon / 3.0
    covered = n_degenerate * eta
    current = covered
    while current < target and len(members) < n:
        base = np.minimum(eta, r).sum()
        gains = (np.minimum(eta, r[:, None] + G).sum(axis=0) - base) / costs
        gains[chosen] = -np.inf
        s = int(np.argmax(gains))
        if not gains[s] > 0:
            break
        chosen[s] = True
        members.append(s)
        r += G[:, s]
        current = covered + np.minimum(eta, r).sum()
    return members, current >= target


def psi_saturate(instance: Instance, profile: RewardProfile, params: SaturateParams = SaturateParams()) -> SolveReport:
    """Binary search on the target ratio with a greedy saturating cover.

    For each guess ``eta`` a set is grown greedily (best per-cost gain of
    the truncated sum, no budget check while growing) until the truncated
    sum reaches ``eta |Pi| - eta eps / 3``.  If it costs more than
    ``beta L`` the guess is lowered, otherwise the set is kept and the
    lower end moves to ``eta (1 - eps / 3)``.

    With ``beta = bicriteria_beta(|Pi|, eps)`` the returned score is within
    ``eps`` of the optimum at budget ``L``; with ``beta = 1`` the result
    respects the budget.
    """
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile, params.inner_oracle)
    eps, P = params.epsilon, instance.num_settings
    active = ~profile.degenerate
    G = profile.normalized()[active]
    costs = instance.costs.astype(np.float64)
    limit = params.beta * instance.budget

    lo, hi = 0.0, 1.0
    best = None
    while hi - lo >= eps:
        eta = (hi + lo) / 2.0
        members, saturated = _saturate_once(G, costs, eta, P, eps, int((~active).sum()))
        if not saturated or costs[members].sum() > limit:
            hi = eta
        else:
            lo = eta * (1.0 - eps / 3.0)
            best = members
    flags = () if best is not None else ("no-feasible-saturation",)
    name = "psi-saturate" if params.inner_oracle == "exact-dp" else "greedy-saturate"
    return _report(instance, profile, best or [], name, t0, flags, params.beta, eps)


# -- heuristics -------------------------------------------------------------

def all_greedy(instance: Instance, profile: RewardProfile) -> SolveReport:
    """Best of the per-model optimal placements under the robust score."""
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile, "exact-dp")
    best, best_score = (), -np.inf
    for members in profile.optimal:
        score, _ = objective(instance, profile, members)
        if score > best_score:
            best, best_score = members, score
    return _report(instance, profile, best, "all-greedy", t0)


def _greedy_static(keys, gains, costs, budget, lazy):
    """Budgeted greedy where each state's gain never changes."""
    n = keys.shape[0]
    chosen, spent = [], 0
    if lazy:
        for s in sorted(range(n), key=lambda s: (-keys[s], s)):
            if gains[s] <= GAIN_TOL:
                continue
            if spent + costs[s] <= budget:
                chosen.append(s)
                spent += int(costs[s])
        return chosen
    open_ = np.ones(n, dtype=bool)
    while True:
        ok = open_ & (costs <= budget - spent) & (gains > GAIN_TOL)
        if not ok.any():
            return chosen
        s = int(np.argmax(np.where(ok, keys, -np.inf)))
        chosen.append(s)
        open_[s] = False
        spent += int(costs[s])


def myopic(instance: Instance, profile: RewardProfile, lazy: bool = True, verify_lazy: bool = False) -> SolveReport:
    """Greedy on the worst per-model normalized gain per unit cost.

    By additivity the normalized marginal gain of a state does not depend
    on the current set, so the lazy variant is one pass in key order.
    ``verify_lazy`` reruns the eager loop and keeps its result (flagged)
    should the two ever disagree.
    """
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile)
    G = profile.normalized()[~profile.degenerate]
    costs = instance.costs
    gains = G.min(axis=0) if G.shape[0] else np.zeros(instance.n)
    keys = gains / costs
    chosen = _greedy_static(keys, gains, costs, instance.budget, lazy)
    flags = ()
    if lazy and verify_lazy:
        eager = _greedy_static(keys, gains, costs, instance.budget, False)
        if sorted(eager) != sorted(chosen):
            chosen, flags = eager, ("lazy-mismatch",)
    return _report(instance, profile, chosen, "myopic", t0, flags)


def _best_of(keys, idx):
    # highest key, lowest index on ties
    top = keys.max()
    return float(top), int(idx[keys == top].min())


def _bws_select(V, costs, budget, lazy, block=256):
    A, n = V.shape
    F = np.zeros(A)
    H = 0.0
    chosen = np.zeros(n, dtype=bool)
    order, spent = [], 0
    if lazy:
        # min over models of an additive vector is not submodular, so stale
        # gains bound nothing; max_i v_is / c_s bounds the gain at any set
        upper = V.max(axis=0) / costs
        scan = np.lexsort((np.arange(n), -upper))
    while True:
        room = budget - spent
        if lazy:
            best, best_s = -np.inf, -1
            for start in range(0, n, block):
                if upper[scan[start]] < best:
                    break
                cand = scan[start:start + block]
                cand = cand[~chosen[cand] & (costs[cand] <= room)]
                if cand.size == 0:
                    continue
                gain = np.min(F[:, None] + V[:, cand], axis=0) - H
                ok = gain > GAIN_TOL
                if not ok.any():
                    continue
                key, s = _best_of(gain[ok] / costs[cand[ok]], cand[ok])
                if key > best or (key == best and s < best_s):
                    best, best_s = key, s
            if best_s < 0:
                break
            s = best_s
        else:
            gain = np.min(F[:, None] + V, axis=0) - H
            ok = ~chosen & (costs <= room) & (gain > GAIN_TOL)
            if not ok.any():
                break
            s = int(np.argmax(np.where(ok, gain / costs, -np.inf)))
        chosen[s] = True
        order.append(s)
        spent += int(costs[s])
        F = F + V[:, s]
        H = F.min()
    return order


def bws(instance: Instance, profile: RewardProfile, lazy: bool = True, verify_lazy: bool = False) -> SolveReport:
    """Best-worst search: greedy on ``H(S) = min_i F(S | pi_i)`` per unit cost.

    Uses raw (unnormalized) rewards.  The lazy variant prunes candidates by
    the static bound ``max_i F({s}|pi_i) / c_s`` and selects exactly what
    the eager loop would.
    """
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile)
    V = profile.values[~profile.degenerate]
    costs = instance.costs.astype(np.float64)
    if V.shape[0] == 0:
        return _report(instance, profile, [], "bws", t0)
    chosen = _bws_select(V, costs, instance.budget, lazy)
    flags = ()
    if lazy and verify_lazy:
        eager = _bws_select(V, costs, instance.budget, False)
        if sorted(eager) != sorted(chosen):
            chosen, flags = eager, ("lazy-mismatch",)
    return _report(instance, profile, chosen, "bws", t0, flags)


@dataclass(frozen=True, eq=False)
class DpTable:
    """Result of the tuple-valued knapsack recursion.

    ``take[i, j]`` records whether entry ``(i + 1, j)`` chose item ``i``;
    ``last_row`` holds the tuples of row ``n``.  ``entries`` is the full
    ``(n + 1, L + 1, |Pi|)`` table and is only kept on request.
    """

    take: np.ndarray
    last_row: np.ndarray
    members: tuple
    entries: Optional[np.ndarray] = None


def dp_rrp_table(scenarios: np.ndarray, costs: Sequence[int], budget: int,
                 keep_entries: bool = False, max_cells: int = DEFAULT_DP_CELLS) -> DpTable:
    """Fill ``M[i, j] = max{M[i-1, j], M[i-1, j-c_i] + g_i}`` over tuples.

    A tuple beats another when its minimum coordinate is larger; equal
    minima fall back to the larger coordinate sum, and a full tie keeps the
    entry without item ``i``.
    """
    g = np.array(scenarios, dtype=np.float64, ndmin=2)
    costs = np.asarray(costs, dtype=np.int64)
    A, n = g.shape
    L = int(budget)
    cells = A * (n + 1) * (L + 1)
    if cells > max_cells:
        raise ResourceLimitError(
            f"DP table needs {cells} tuple coordinates, above the cap of {max_cells}"
        )
    cur = np.zeros((A, L + 1))
    take = np.zeros((n, L + 1), dtype=bool)
    entries = np.zeros((n + 1, L + 1, A)) if keep_entries else None
    for i in range(n):
        c = int(costs[i])
        if c <= L:
            cand = cur[:, : L + 1 - c] + g[:, i : i + 1]
            old = cur[:, c:]
            cmin, omin = cand.min(axis=0), old.min(axis=0)
            better = (cmin > omin) | ((cmin == omin) & (cand.sum(axis=0) > old.sum(axis=0)))
            take[i, c:] = better
            cur[:, c:] = np.where(better, cand, old)
        if keep_entries:
            entries[i + 1] = cur.T
    members, j = [], L
    for i in range(n - 1, -1, -1):
        if take[i, j]:
            members.append(i)
            j -= int(costs[i])
    return DpTable(take, cur, tuple(sorted(members)), entries)


def dp_rrp(instance: Instance, profile: RewardProfile, max_cells: int = DEFAULT_DP_CELLS) -> SolveReport:
    """Knapsack recursion over normalized per-model tuples (``Theta(|Pi| L n)``).

    Exact for a single model; a heuristic otherwise.
    """
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile)
    cells = instance.num_settings * (instance.n + 1) * (instance.budget + 1)
    if cells > max_cells:
        raise ResourceLimitError(f"DP table needs {cells} tuple coordinates, above the cap of {max_cells}")
    g = profile.normalized()[~profile.degenerate]
    if g.shape[0] == 0:
        return _report(instance, profile, [], "dp-rrp", t0)
    table = dp_rrp_table(g, instance.costs, instance.budget, max_cells=max_cells)
    return _report(instance, profile, table.members, "dp-rrp", t0)


def brute_force(instance: Instance, profile: RewardProfile, max_states: int = DEFAULT_BRUTE_FORCE_CAP) -> SolveReport:
    """Exact optimum by enumerating every subset within budget.

    Ties go to the cheaper set, then to the lexicographically smaller one.
    """
    n = instance.n
    if n > max_states:
        raise ResourceLimitError(f"brute force over n={n} states exceeds the cap of {max_states}")
    t0 = time.perf_counter()
    profile = _with_denominators(instance, profile)
    active = ~profile.degenerate
    vals = profile.values[active]
    denom = profile.denominators[active]
    costs = instance.costs.astype(np.float64)
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    chunk = 1 << 15
    best = None  # (score, cost, members)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        cost = bits @ costs
        feasible = cost <= instance.budget
        if not feasible.any():
            continue
        masks, bits, cost = masks[feasible], bits[feasible], cost[feasible]
        if vals.shape[0]:
            score = ((bits @ vals.T) / denom).min(axis=1)
        else:
            score = np.ones(masks.shape[0])
        top = score.max()
        if best is not None and top < best[0]:
            continue
        tied = np.flatnonzero(score == top)
        cmin = cost[tied].min()
        tied = tied[cost[tied] == cmin]
        members = min(tuple(np.flatnonzero(bits[t]).tolist()) for t in tied)
        cand = (float(top), float(cmin), members)
        if best is None or (-cand[0], cand[1], cand[2]) < (-best[0], best[1], best[2]):
            best = cand
    return _report(instance, profile, best[2] if best else (), "brute-force", t0)


ALGORITHMS = ("psi-saturate", "greedy-saturate", "all-greedy", "myopic", "bws", "dp-rrp", "brute-force")


def solve(instance: Instance, profile: RewardProfile, algorithm: str, epsilon: float = 0.01,
          beta: float = 1.0, **kwargs) -> SolveReport:
    """Dispatch by algorithm identifier."""
    if algorithm in ("psi-saturate", "greedy-saturate"):
        oracle = "exact-dp" if algorithm == "psi-saturate" else "greedy"
        return psi_saturate(instance, profile, SaturateParams(epsilon, beta, oracle))
    funcs = {
        "all-greedy": all_greedy,
        "myopic": myopic,
        "bws": bws,
        "dp-rrp": dp_rrp,
        "brute-force": brute_force,
    }
    if algorithm not in funcs:
        raise ParameterError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    return funcs[algorithm](instance, profile, **kwargs)
