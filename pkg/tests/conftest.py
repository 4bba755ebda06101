import itertools

import numpy as np
import pytest
import scipy.sparse as sp

from reward_placement import Instance, MobilityModel, reward_profile, optimal_per_model


def random_model(rng, n, K, density=0.5, monotone_steps=True):
    """Random row-stochastic model with random survival columns."""
    dense = rng.random((n, n)) * (rng.random((n, n)) < density)
    for s in range(n):
        if dense[s].sum() == 0:
            dense[s, rng.integers(n)] = 1.0
    dense /= dense.sum(axis=1, keepdims=True)
    initial = rng.random(n)
    initial /= initial.sum()
    steps = rng.random((n, K))
    if monotone_steps:
        steps = -np.sort(-steps, axis=1)
    return MobilityModel(initial, sp.csr_matrix(dense), steps)


def random_instance(rng, n, num_settings, K=3, max_cost=4, budget=None, density=0.5):
    models = tuple(random_model(rng, n, K, density) for _ in range(num_settings))
    costs = rng.integers(1, max_cost + 1, size=n)
    if budget is None:
        budget = int(rng.integers(1, max(2, costs.sum() // 2) + 1))
    return Instance(models, costs, budget)


def prepared(instance, oracle="exact-dp"):
    profile, _ = optimal_per_model(instance, reward_profile(instance.models), oracle)
    return profile


def enumerate_subsets(n):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def chain_ab(K=1):
    """A -> B with probability 1, B absorbing, everyone starts at A."""
    T = np.array([[0.0, 1.0], [0.0, 1.0]])
    return MobilityModel([1.0, 0.0], sp.csr_matrix(T), np.ones((2, K)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
