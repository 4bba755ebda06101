"""
When the heuristics get nothing
===============================

Each setting funnels all agents through one group of items.  A placement
scores above zero only if it touches every group, i.e. it is a hitting
set.  Greedy rules that look at one setting, or at one state at a time,
never see that and end with a score of exactly zero.
"""
from reward_placement import SaturateParams, brute_force, gen_hitting_set_adversarial, bicriteria_beta, optimal_per_model
from reward_placement import psi_saturate, reward_profile, solve

groups = [["a", "b"], ["c", "d", "e", "f"], ["g"]]
inst = gen_hitting_set_adversarial(groups, budget=3)
profile, _ = optimal_per_model(inst, reward_profile(inst.models))
labels = [f"group{i}" for i in range(len(groups))] + [x for g in groups for x in g]

for alg in ("all-greedy", "myopic", "bws", "dp-rrp"):
    rep = solve(inst, profile, alg)
    print(f"{alg:10s} score {rep.score:.3f}  picks {[labels[s] for s in rep.placement.members]}")

rep = brute_force(inst, profile)
print(f"{'optimum':10s} score {rep.score:.3f}  picks {[labels[s] for s in rep.placement.members]}")

# Saturation sees all settings at once.  Allowed to overspend by the
# logarithmic factor it always finds a hitting set.
eps = 0.01
beta = bicriteria_beta(inst.num_settings, eps)
rep = psi_saturate(inst, profile, SaturateParams(eps, beta))
print(f"saturate (budget x{beta:.1f}) score {rep.score:.3f}  cost {rep.budget_used}  "
      f"picks {[labels[s] for s in rep.placement.members]}")
