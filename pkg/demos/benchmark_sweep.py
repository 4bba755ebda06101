"""
A small parameter sweep
=======================

The harness generates fresh graphs for every sweep value and repeat, runs
the chosen algorithms and writes one CSV row per run plus a file of means.
The same runs are available from the shell as ``rrp-bench run``.
"""
import csv
import sys
import tempfile
from pathlib import Path

from reward_placement.harness import ExperimentConfig, aggregate_path, run

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp()) / "settings.csv"
cfg = ExperimentConfig(
    generator="er", n=500, sweep="num_settings", values=(1, 5, 10), repeats=5,
    algorithms=("psi-saturate", "all-greedy", "myopic", "bws", "dp-rrp"), off_grid=True,
)
run(cfg, out)
print("rows written to", out)

with open(aggregate_path(out)) as fh:
    rows = list(csv.DictReader(fh))
print(f"{'algorithm':14s}" + "".join(f"  |Pi|={v:<5}" for v in cfg.values))
for alg in cfg.algorithms:
    means = [float(r["score_mean"]) for r in rows if r["algorithm"] == alg]
    print(f"{alg:14s}" + "".join(f"  {m:.4f}    " for m in means))
