"""
Late arrivals follow PageRank
=============================

If agents never stop, the share of them standing on a state after many
steps is the stationary distribution of the chain, which is what undamped
PageRank power iteration computes.
"""
import numpy as np
import scipy.sparse as sp

from reward_placement import MobilityModel, pagerank, per_step_reward

rng = np.random.default_rng(0)
n = 8
T = rng.random((n, n)) * (rng.random((n, n)) < 0.5) + np.eye(n) * 0.1
T /= T.sum(axis=1, keepdims=True)
init = np.full(n, 1.0 / n)

pr, iters = pagerank(sp.csr_matrix(T), damping=1.0, init=init, return_iterations=True)
print(f"power iteration converged after {iters} steps")

k = iters + 5
m = MobilityModel(init, T, np.ones((n, k)))
late = np.array([per_step_reward(m, [s], k) for s in range(n)])
for s in range(n):
    print(f"state {s}: pagerank {pr[s]:.6f}  arrivals at step {k} {late[s]:.6f}")
print("largest gap:", float(np.abs(pr - late).max()))

# Damping mixes in a uniform restart and the two no longer agree.
print("damped 0.85:", np.round(pagerank(sp.csr_matrix(T), 0.85), 4))
