"""
Rewards collected by a random walk
==================================

A mobility model says where agents start, how they move and how long they
keep moving.  Placing rewards on a few states and counting arrivals gives
the cumulative reward of that placement.
"""
import numpy as np
import scipy.sparse as sp

from reward_placement import MobilityModel, cumulative_reward, per_step_reward, reward_profile

# Four states on a line.  Agents drift right and get stuck at the end.
T = np.array([
    [0.2, 0.8, 0.0, 0.0],
    [0.1, 0.3, 0.6, 0.0],
    [0.0, 0.1, 0.3, 0.6],
    [0.0, 0.0, 0.0, 1.0],
])
initial = np.array([0.7, 0.3, 0.0, 0.0])

# Everyone walks at least one step, half of them keep going for a second
# and a quarter for a third.
steps = np.tile([1.0, 0.5, 0.25], (4, 1))
m = MobilityModel(initial, sp.csr_matrix(T), steps)

for k in (1, 2, 3):
    print(f"arrivals at state 2 on step {k}: {per_step_reward(m, [2], k):.4f}")
print("total for {2}:", round(cumulative_reward(m, [2]), 4))

# Rewards add up: the value of a set is the sum of its singletons, so one
# vector per model is all the solvers ever need.
prof = reward_profile([m])
print("singleton rewards:", np.round(prof.values[0], 4))
print("F({1, 3}) =", round(cumulative_reward(m, [1, 3]), 4),
      "=", round(prof.values[0, 1] + prof.values[0, 3], 4))
