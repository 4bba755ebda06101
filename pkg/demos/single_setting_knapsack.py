"""
One model is just a knapsack
============================

With a single model every state has a fixed value, so choosing the best
placement within budget is a 0-1 knapsack.  The table solution is exact,
the density greedy is within a factor of two.
"""
import numpy as np

from reward_placement import GeneratorConfig, KnapsackInput, generate, knapsack_dp, knapsack_greedy, reward_profile

inst = generate("er", GeneratorConfig(n=400, num_settings=1, horizon=4, budget_fraction=0.02, seed=0))
values = reward_profile(inst.models).values[0]
print(f"{inst.n} states, budget {inst.budget}, total cost {inst.costs.sum()}")

exact, best = knapsack_dp(KnapsackInput(values, inst.costs, inst.budget))
approx, got = knapsack_greedy(KnapsackInput(values, inst.costs, inst.budget))
print(f"table:  {best:.4f} using {len(exact)} states, cost {exact.cost}")
print(f"greedy: {got:.4f} using {len(approx)} states, cost {approx.cost} ({got / best:.2%} of optimum)")

# The greedy fills the budget by value per cost and leaves a little on the
# table; these are the states only the exact answer uses.
only_exact = sorted(set(exact.members) - set(approx.members))
print("picked only by the table:", only_exact[:10], "..." if len(only_exact) > 10 else "")
print("their value per cost:", np.round(values[only_exact[:5]] / inst.costs[only_exact[:5]], 4))
