"""
Placing rewards for an uncertain future
=======================================

The same road network can be driven in many ways.  Each setting below is a
differently weighted copy of one random graph; a placement is judged by its
worst ratio to what that setting alone could have achieved.
"""
import time

from reward_placement import GeneratorConfig, generate, optimal_per_model, reward_profile, solve

cfg = GeneratorConfig(n=2000, num_settings=8, horizon=6, seed=12)
for kind in ("er", "scale-free"):
    inst = generate(kind, cfg)
    t0 = time.perf_counter()
    profile, _ = optimal_per_model(inst, reward_profile(inst.models))
    print(f"\n{kind}: n={inst.n}, {inst.num_settings} settings, budget {inst.budget} "
          f"(precomputation {1e3 * (time.perf_counter() - t0):.0f} ms)")
    for alg in ("psi-saturate", "greedy-saturate", "all-greedy", "myopic", "bws", "dp-rrp"):
        rep = solve(inst, profile, alg, epsilon=1e-3)
        worst = int(rep.per_model_ratio.argmin())
        print(f"  {alg:16s} score {rep.score:.4f}  worst setting {worst}  "
              f"cost {rep.budget_used:5d}  {1e3 * rep.wall_time:7.1f} ms")
