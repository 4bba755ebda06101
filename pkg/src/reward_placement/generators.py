"""Synthetic and adversarial benchmark instances.

Random graphs are turned into families of mobility models by drawing one
set of edge weights per setting, with noise that grows with the setting
index.  All generators are pure functions of their arguments and seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InstanceFormatError, ParameterError
from .mobility import Instance, MobilityModel

__all__ = [
    "GeneratorConfig",
    "Digraph",
    "gen_erdos_renyi",
    "gen_scale_free",
    "sample_settings",
    "steps_matrix",
    "gen_hitting_set_adversarial",
    "read_collection",
    "cost_from_frequency",
    "generate",
]

STEP_MODELS = ("always-K", "uniform-steps")


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 10000
    avg_in_degree: float = 6.0
    p_beta: float = 0.8
    num_settings: int = 10
    horizon: int = 6
    budget_fraction: float = 0.25
    seed: int = 0
    step_model: str = "always-K"

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be positive")
        if not 0.0 < self.budget_fraction <= 1.0:
            raise ParameterError(f"budget_fraction {self.budget_fraction} outside (0, 1]")
        if not 0.0 < self.p_beta < 1.0:
            raise ParameterError(f"p_beta {self.p_beta} outside (0, 1)")
        if not 0.0 <= self.avg_in_degree < self.n:
            raise ParameterError(f"average in-degree {self.avg_in_degree} must lie in [0, n)")
        if self.num_settings < 1 or self.horizon < 1:
            raise ParameterError("num_settings and horizon must be positive")
        if self.step_model not in STEP_MODELS:
            raise ParameterError(f"unknown step model {self.step_model!r}")


@dataclass(frozen=True, eq=False)
class Digraph:
    """Directed graph as a duplicate-free ``(m, 2)`` edge array."""

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ParameterError("edge endpoint out of range")
        e = np.unique(e, axis=0)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n)

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.n)


def gen_erdos_renyi(n: int, avg_in_degree: float, seed: int) -> Digraph:
    """Directed G(n, p) without self-loops, ``p = <d> / (n - 1)``.

    Edges are found by geometric skipping over the ``n (n - 1)`` ordered
    pairs, so the cost is proportional to the number of edges.
    """
    if avg_in_degree < 0 or (avg_in_degree >= n and not (n == 1 and avg_in_degree == 0)):
        raise ParameterError(f"average in-degree {avg_in_degree} must lie in [0, n)")
    pairs = n * (n - 1)
    if avg_in_degree == 0 or pairs == 0:
        return Digraph(n, np.zeros((0, 2), dtype=np.int64))
    p = avg_in_degree / (n - 1)
    rng = np.random.default_rng(seed)
    chunks, pos = [], -1
    batch = max(16, int(pairs * p * 1.1) + 16)
    while True:
        # gaps between successive successes are Geometric(p) >= 1
        idx = pos + np.cumsum(rng.geometric(p, size=batch))
        keep = idx[idx < pairs]
        chunks.append(keep)
        if keep.size < idx.size:
            break
        pos = int(idx[-1])
    flat = np.concatenate(chunks)
    u, r = np.divmod(flat, n - 1)
    v = r + (r >= u)
    return Digraph(n, np.column_stack([u, v]))


def gen_scale_free(n: int, p_beta: float, seed: int, delta_in: float = 1.0, delta_out: float = 1.0) -> Digraph:
    """Directed preferential attachment in the style of Bollobas et al.

    Starting from one node, each round draws one of three moves:

    * ``p_alpha``: a new node with an edge to an existing node picked with
      probability proportional to ``in_degree + delta_in``;
    * ``p_beta``: an edge between existing nodes, source by
      ``out_degree + delta_out``, target by ``in_degree + delta_in``;
    * ``p_gamma``: a new node with an edge from an existing node picked by
      ``out_degree + delta_out``;

    with ``p_gamma = (1 - p_beta) / 3`` and ``p_alpha = 2 p_gamma``.  Rounds
    continue until ``n`` nodes exist; repeated edges are merged.
    """
    if not 0.0 < p_beta < 1.0:
        raise ParameterError(f"p_beta {p_beta} outside (0, 1)")
    p_gamma = (1.0 - p_beta) / 3.0
    p_alpha = 2.0 * p_gamma
    rng = np.random.default_rng(seed)
    sources: List[int] = []
    targets: List[int] = []
    nodes = 1

    def by_in():
        # in_degree + delta_in: either the head of a uniform edge or a uniform node
        m = len(targets)
        if rng.random() * (m + delta_in * nodes) < m:
            return targets[int(rng.integers(m))]
        return int(rng.integers(nodes))

    def by_out():
        m = len(sources)
        if rng.random() * (m + delta_out * nodes) < m:
            return sources[int(rng.integers(m))]
        return int(rng.integers(nodes))

    while nodes < n:
        r = rng.random()
        if r < p_alpha:
            w = by_in()
            sources.append(nodes)
            targets.append(w)
            nodes += 1
        elif r < p_alpha + p_beta:
            u, w = by_out(), by_in()
            sources.append(u)
            targets.append(w)
        else:
            w = by_out()
            sources.append(w)
            targets.append(nodes)
            nodes += 1
    return Digraph(n, np.column_stack([np.asarray(sources, dtype=np.int64), np.asarray(targets, dtype=np.int64)]))


def steps_matrix(n: int, K: int, step_model: str = "always-K") -> np.ndarray:
    """``always-K``: every agent walks ``K`` steps.  ``uniform-steps``: the
    walk length is uniform on ``1..K``, so ``P(at least k) = (K - k + 1) / K``."""
    if step_model == "always-K":
        return np.ones((n, K))
    if step_model == "uniform-steps":
        return np.tile((K - np.arange(K)) / K, (n, 1))
    raise ParameterError(f"unknown step model {step_model!r}")


def sample_settings(g: Digraph, num_settings: int, K: int, seed: int, step_model: str = "always-K",
                    budget_fraction: float = 0.25) -> Instance:
    """Draw ``num_settings`` weighted versions of ``g`` as one instance.

    Setting ``i`` (1-based) weights edge ``(u, v)`` by a normal draw with
    mean ``1 / d_u`` and standard deviation ``i / (10 d_u)``, ``d_u`` being
    the out-degree of ``u``; negative draws become zero.  Rows are then
    normalized (a row with no weight becomes an absorbing self-loop), the
    initial distribution follows each node's total outgoing weight, and a
    node costs the floored mean, over settings, of its positively weighted
    in-neighbours (at least 1).  Setting ``i`` draws from the stream
    ``seed ^ i``.
    """
    if num_settings < 1:
        raise ParameterError("num_settings must be positive")
    if not 0.0 < budget_fraction <= 1.0:
        raise ParameterError(f"budget_fraction {budget_fraction} outside (0, 1]")
    n = g.n
    src, dst = g.edges[:, 0], g.edges[:, 1]
    deg = g.out_degree().astype(np.float64)
    mu = 1.0 / deg[src] if src.size else np.zeros(0)
    steps = steps_matrix(n, K, step_model)
    models = []
    in_counts = np.zeros(n)
    for i in range(1, num_settings + 1):
        rng = np.random.default_rng(seed ^ i)
        w = np.maximum(rng.normal(mu, i * mu / 10.0), 0.0)
        out_weight = np.bincount(src, weights=w, minlength=n)
        in_counts += np.bincount(dst[w > 0], minlength=n)
        dead = out_weight <= 0
        with np.errstate(divide="ignore", invalid="ignore"):
            probs = w / out_weight[src]
        keep = w > 0
        rows = np.concatenate([src[keep], np.flatnonzero(dead)])
        cols = np.concatenate([dst[keep], np.flatnonzero(dead)])
        vals = np.concatenate([probs[keep], np.ones(int(dead.sum()))])
        T = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        total = out_weight.sum()
        initial = out_weight / total if total > 0 else np.full(n, 1.0 / n)
        models.append(MobilityModel(initial, T, steps))
    costs = np.maximum(1, np.floor(in_counts / num_settings)).astype(np.int64)
    budget = int(math.floor(budget_fraction * int(costs.sum())))
    return Instance(tuple(models), costs, budget)


def gen_hitting_set_adversarial(collection: Sequence[Sequence], budget: int, horizon: int = 3) -> Instance:
    """Robust placement instance in which only hitting sets score above zero.

    One left state per subset and one absorbing right state per item (items
    ordered by first appearance).  Model ``i`` sends every other left state
    to left state ``i`` and left state ``i`` uniformly to the items of
    subset ``i``.  Agents start uniformly on the left; items cost 1 and left
    states cost ``budget + 1``.
    """
    subsets = [list(dict.fromkeys(b)) for b in collection]
    if not subsets:
        raise ParameterError("collection is empty")
    for i, b in enumerate(subsets):
        if not b:
            raise ParameterError(f"subset {i} is empty, its reward is unreachable")
    if horizon < 2:
        raise ParameterError("horizon must be at least 2 for mass to reach the items")
    if budget < 0:
        raise ParameterError("budget must be non-negative")
    items = list(dict.fromkeys(x for b in subsets for x in b))
    index = {x: j for j, x in enumerate(items)}
    M, X = len(subsets), len(items)
    n = M + X
    initial = np.zeros(n)
    initial[:M] = 1.0 / M
    steps = np.ones((n, horizon))
    models = []
    for i, b in enumerate(subsets):
        edges = [(j, i, 1.0) for j in range(M) if j != i]
        edges += [(i, M + index[x], 1.0 / len(b)) for x in b]
        edges += [(M + j, M + j, 1.0) for j in range(X)]
        models.append(MobilityModel.from_edges(n, edges, initial, steps))
    costs = np.concatenate([np.full(M, budget + 1), np.ones(X)]).astype(np.int64)
    return Instance(tuple(models), costs, budget)


def read_collection(path) -> List[List[str]]:
    """One subset per line, items separated by whitespace; blank lines and
    ``#`` comments are skipped."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line.split())
    if not out:
        raise InstanceFormatError(f"{path}: no subsets found")
    return out


def cost_from_frequency(frequency) -> np.ndarray:
    """Visit-frequency cost rule ``floor(f / 25 + 50)`` for trajectory data."""
    f = np.asarray(frequency, dtype=np.float64)
    return np.floor(f / 25.0 + 50.0).astype(np.int64)


def generate(kind: str, cfg: GeneratorConfig) -> Instance:
    """Graph plus settings from one config; ``kind`` is ``er`` or ``scale-free``."""
    if kind == "er":
        g = gen_erdos_renyi(cfg.n, cfg.avg_in_degree, cfg.seed)
    elif kind == "scale-free":
        g = gen_scale_free(cfg.n, cfg.p_beta, cfg.seed)
    else:
        raise ParameterError(f"unknown generator {kind!r}")
    return sample_settings(g, cfg.num_settings, cfg.horizon, cfg.seed, cfg.step_model, cfg.budget_fraction)
