"""Markov mobility models and the cumulative reward they induce.

A mobility model describes agents that start from an initial distribution
over ``n`` states, hop along a row-stochastic transition matrix and stop
after a random number of steps (at most ``K``).  Placing rewards on a set
of states yields an expected number of reward-state arrivals, which is
additive over the reward states; every solver in this package works off the
per-state decomposition computed by :func:`reward_profile`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, DimensionError, ParameterError

PROB_TOL = 1e-9

__all__ = [
    "MobilityModel",
    "Placement",
    "RewardProfile",
    "Instance",
    "validate_model",
    "per_step_reward",
    "cumulative_reward",
    "reward_profile",
    "pagerank",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_csr(transitions, n: int) -> sp.csr_matrix:
    mat = sp.csr_matrix(transitions, dtype=np.float64, copy=True)
    if mat.shape != (n, n):
        raise DimensionError(f"transitions has shape {mat.shape}, expected {(n, n)}")
    mat.sum_duplicates()
    mat.sort_indices()
    for arr in (mat.data, mat.indices, mat.indptr):
        arr.setflags(write=False)
    return mat


@dataclass(frozen=True, eq=False)
class MobilityModel:
    """One setting ``(S, I, T, M)`` of the agents' movement.

    Parameters
    ----------
    initial : array_like, shape (n,)
        Initial probability of each state.
    transitions : sparse or dense matrix, shape (n, n)
        Row-stochastic; entry ``(s, t)`` is the probability of moving from
        ``s`` to ``t``.  Stored as CSR.
    steps : array_like, shape (n, K)
        Column ``k - 1`` holds the probability that an agent starting at
        each state takes at least ``k`` steps.

    Array invariants (stochasticity, monotone step columns) are reported by
    :func:`validate_model` rather than enforced here; only shapes are.
    """

    initial: np.ndarray
    transitions: sp.csr_matrix
    steps: np.ndarray

    def __post_init__(self):
        initial = np.array(self.initial, dtype=np.float64).reshape(-1)
        n = initial.shape[0]
        if n < 1:
            raise DimensionError("a model needs at least one state")
        steps = np.array(self.steps, dtype=np.float64)
        if steps.ndim != 2 or steps.shape[0] != n or steps.shape[1] < 1:
            raise DimensionError(f"steps has shape {steps.shape}, expected ({n}, K>=1)")
        object.__setattr__(self, "initial", _frozen(initial))
        object.__setattr__(self, "steps", _frozen(steps))
        T = _as_csr(self.transitions, n)
        object.__setattr__(self, "transitions", T)
        # arrival-side CSR so each propagation is a plain row-wise matvec
        object.__setattr__(self, "_inflow", T.T.tocsr())

    @classmethod
    def from_edges(cls, n, edges, initial, steps) -> "MobilityModel":
        """Build from ``(row, col, prob)`` triples."""
        edges = list(edges)
        if edges:
            rows, cols, probs = (np.asarray(x) for x in zip(*edges))
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
            probs = np.zeros(0)
        mat = sp.csr_matrix((probs.astype(np.float64), (rows.astype(np.int64), cols.astype(np.int64))), shape=(n, n))
        return cls(initial, mat, steps)

    @property
    def n(self) -> int:
        return self.initial.shape[0]

    @property
    def horizon(self) -> int:
        return self.steps.shape[1]

    @property
    def nnz(self) -> int:
        return self.transitions.nnz

    def propagate(self, x: np.ndarray) -> np.ndarray:
        """One step of distribution evolution, ``x'[t] = sum_s x[s] T[s, t]``."""
        return self._inflow @ x


@dataclass(frozen=True)
class Placement:
    """A set of reward states, kept sorted, plus its total cost."""

    members: tuple
    n: int
    cost: int = 0

    @classmethod
    def from_members(cls, members: Iterable[int], n: int, costs: Optional[Sequence[int]] = None) -> "Placement":
        mem = tuple(sorted({int(s) for s in members}))
        if mem and (mem[0] < 0 or mem[-1] >= n):
            raise DimensionError(f"placement members {mem} out of range for n={n}")
        cost = 0 if costs is None else int(sum(int(costs[s]) for s in mem))
        return cls(mem, n, cost)

    @classmethod
    def empty(cls, n: int) -> "Placement":
        return cls((), n, 0)

    @property
    def indicator(self) -> np.ndarray:
        r = np.zeros(self.n, dtype=np.float64)
        r[list(self.members)] = 1.0
        return r

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, s):
        return s in self.members


PlacementLike = Union[Placement, Iterable[int]]


def _indicator(p: PlacementLike, n: int) -> np.ndarray:
    if isinstance(p, Placement):
        if p.n != n:
            raise DimensionError(f"placement over {p.n} states used with a model over {n}")
        return p.indicator
    r = np.zeros(n, dtype=np.float64)
    idx = np.fromiter((int(s) for s in p), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise DimensionError(f"placement members out of range for n={n}")
    r[idx] = 1.0
    return r


@dataclass(frozen=True, eq=False)
class RewardProfile:
    """Per-model, per-state singleton rewards ``F({s} | pi_i)``.

    ``denominators`` (the per-model optimal reward within budget) and
    ``optimal`` (the corresponding member tuples) are absent until
    :func:`reward_placement.solvers.optimal_per_model` fills them in.
    """

    values: np.ndarray
    denominators: Optional[np.ndarray] = None
    optimal: Optional[tuple] = None
    oracle: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.array(self.values, dtype=np.float64, ndmin=2)))
        if self.denominators is not None:
            d = np.array(self.denominators, dtype=np.float64).reshape(-1)
            if d.shape[0] != self.values.shape[0]:
                raise DimensionError("one denominator per model is required")
            object.__setattr__(self, "denominators", _frozen(d))

    @property
    def num_settings(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def degenerate(self) -> np.ndarray:
        if self.denominators is None:
            raise ParameterError("denominators have not been computed")
        return self.denominators <= 0.0

    def with_denominators(self, denominators, optimal=None, oracle=None) -> "RewardProfile":
        return RewardProfile(self.values, denominators, optimal, oracle)

    def normalized(self) -> np.ndarray:
        """``values[i, s] / denominators[i]``; degenerate rows are zero."""
        d = np.where(self.degenerate, 1.0, self.denominators)
        g = self.values / d[:, None]
        g[self.degenerate] = 0.0
        return g


@dataclass(frozen=True, eq=False)
class Instance:
    """A family of models over one state set, integer costs and a budget."""

    models: tuple
    costs: np.ndarray
    budget: int

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ParameterError("an instance needs at least one model")
        n, K = models[0].n, models[0].horizon
        for i, m in enumerate(models):
            if m.n != n or m.horizon != K:
                raise DimensionError(
                    f"model {i} has (n, K) = ({m.n}, {m.horizon}), expected ({n}, {K})"
                )
        costs = np.array(self.costs, dtype=np.int64).reshape(-1)
        if costs.shape[0] != n:
            raise DimensionError(f"{costs.shape[0]} costs for {n} states")
        if costs.size and costs.min() < 1:
            raise ParameterError("costs must be positive integers")
        budget = int(self.budget)
        if budget < 0:
            raise ParameterError("budget must be non-negative")
        object.__setattr__(self, "models", models)
        object.__setattr__(self, "costs", _frozen(costs))
        object.__setattr__(self, "budget", budget)

    @property
    def n(self) -> int:
        return self.models[0].n

    @property
    def horizon(self) -> int:
        return self.models[0].horizon

    @property
    def num_settings(self) -> int:
        return len(self.models)

    def placement(self, members: Iterable[int]) -> Placement:
        return Placement.from_members(members, self.n, self.costs)


def validate_model(m: MobilityModel) -> list:
    """Return human-readable invariant violations of ``m`` (empty if valid)."""
    out = []
    n, K = m.n, m.horizon
    init = m.initial
    for s in np.flatnonzero(init < 0):
        out.append(f"initial[{s}] = {init[s]!r} is negative")
    if abs(init.sum() - 1.0) > PROB_TOL:
        out.append(f"initial sums to {init.sum()!r}, not 1")

    T = m.transitions
    if T.nnz and T.data.min() < 0:
        rows = np.repeat(np.arange(n), np.diff(T.indptr))
        for j in np.flatnonzero(T.data < 0):
            out.append(f"transitions[{rows[j]}, {T.indices[j]}] = {T.data[j]!r} is negative")
    row_sums = np.asarray(T.sum(axis=1)).reshape(-1)
    for s in np.flatnonzero(np.abs(row_sums - 1.0) > PROB_TOL):
        out.append(f"transitions row {s} sums to {row_sums[s]!r}, not 1")

    M = m.steps
    bad = np.argwhere((M < 0) | (M > 1))
    for s, k in bad:
        out.append(f"steps[{s}, k={k + 1}] = {M[s, k]!r} outside [0, 1]")
    if K > 1:
        rises = np.argwhere(M[:, 1:] > M[:, :-1] + PROB_TOL)
        for s, k in rises:
            out.append(
                f"steps[{s}, k={k + 2}] = {M[s, k + 1]!r} exceeds steps[{s}, k={k + 1}] = {M[s, k]!r}"
            )
    return out


def _check_step(m: MobilityModel, k: int):
    if not 1 <= k <= m.horizon:
        raise ParameterError(f"step index {k} outside 1..{m.horizon}")


def _arrivals_at(m: MobilityModel, k: int) -> np.ndarray:
    # mass of agents still walking at step k, propagated k times
    x = m.initial * m.steps[:, k - 1]
    for _ in range(k):
        x = m.propagate(x)
    return x


def per_step_reward(m: MobilityModel, p: PlacementLike, k: int) -> float:
    """Expected reward collected at step ``k`` (1-based) under placement ``p``."""
    _check_step(m, k)
    r = _indicator(p, m.n)
    return float(r @ _arrivals_at(m, k))


def cumulative_reward(m: MobilityModel, p: PlacementLike) -> float:
    """Expected total reward over steps ``1..K``.

    Evaluated step by step (quadratic in ``K``); use :func:`reward_profile`
    when many placements are scored against the same model.
    """
    r = _indicator(p, m.n)
    if not r.any():
        return 0.0
    return float(sum(r @ _arrivals_at(m, k) for k in range(1, m.horizon + 1)))


def _singleton_rewards(m: MobilityModel) -> np.ndarray:
    # sum_k P^k (I o M_k) in Horner form: K propagations instead of K(K+1)/2
    K = m.horizon
    weighted = m.initial[:, None] * m.steps
    y = weighted[:, K - 1].copy()
    for k in range(K - 1, 0, -1):
        y = weighted[:, k - 1] + m.propagate(y)
    return m.propagate(y)


def reward_profile(models: Sequence[MobilityModel]) -> RewardProfile:
    """Singleton rewards ``F({s} | pi)`` for every model and state.

    Costs ``O(K (n + m))`` per model, ``m`` being the number of stored
    transitions.
    """
    models = list(models)
    if not models:
        raise ParameterError("need at least one model")
    n, K = models[0].n, models[0].horizon
    for i, m in enumerate(models):
        if m.n != n or m.horizon != K:
            raise DimensionError(f"model {i} has (n, K) = ({m.n}, {m.horizon}), expected ({n}, {K})")
    values = np.empty((len(models), n))
    for i, m in enumerate(models):
        values[i] = _singleton_rewards(m)
    return RewardProfile(values)


def pagerank(transitions, damping: float = 1.0, init=None, tol: float = 1e-12, max_iter: Optional[int] = None,
             return_iterations: bool = False):
    """Power iteration ``PR <- a * propagate(PR) + (1 - a) / N``.

    Parameters
    ----------
    transitions : sparse matrix, shape (N, N)
        Row-stochastic transition matrix.
    damping : float
        ``a`` in ``(0, 1]``.
    init : array_like, optional
        Starting vector; uniform when omitted.
    tol : float
        Stop once the L1 change between iterates is at most ``tol``.
    max_iter : int, optional
        Iteration cap, ``max(1000, 100 * N)`` by default.
    return_iterations : bool
        Also return the number of iterations performed.

    Raises
    ------
    ConvergenceError
        If the cap is reached first.
    """
    T = sp.csr_matrix(transitions, dtype=np.float64)
    N = T.shape[0]
    if T.shape != (N, N):
        raise DimensionError("transition matrix must be square")
    if not 0.0 < damping <= 1.0:
        raise ParameterError(f"damping {damping} outside (0, 1]")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if max_iter is None:
        max_iter = max(1000, 100 * N)
    x = np.full(N, 1.0 / N) if init is None else np.array(init, dtype=np.float64).reshape(-1)
    if x.shape[0] != N:
        raise DimensionError("init length differs from matrix size")
    PT = T.T.tocsr()
    teleport = (1.0 - damping) / N
    residual = np.inf
    for it in range(1, max_iter + 1):
        nxt = damping * (PT @ x) + teleport
        residual = float(np.abs(nxt - x).sum())
        x = nxt
        if residual <= tol:
            return (x, it) if return_iterations else x
    raise ConvergenceError(max_iter, residual)
