"""Parameter sweeps over generated instances, written as CSV.

Each (sweep value, repeat) pair gets its own instance drawn from a seed
derived from the base seed, so results do not depend on execution order.
Per instance the reward profile and per-model optima are computed once and
timed separately ("pre-time") from the solvers.
"""
from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .generators import GeneratorConfig, gen_hitting_set_adversarial, generate, read_collection
from .io import read_instance
from .mobility import Instance, reward_profile
from .solvers import ALGORITHMS, DEFAULT_BRUTE_FORCE_CAP, bicriteria_beta, optimal_per_model, solve

log = logging.getLogger(__name__)

__all__ = ["ExperimentConfig", "run", "run_rows", "CSV_COLUMNS", "SWEEP_RANGES", "default_epsilon", "resolve_beta"]

CSV_COLUMNS = (
    "algorithm", "generator", "n", "num_settings", "K", "L", "beta", "epsilon",
    "repeat", "score", "budget_used", "pre_time_ms", "time_ms",
)
AGG_COLUMNS = (
    "algorithm", "generator", "sweep", "value", "repeats",
    "score_mean", "score_std", "budget_used_mean", "pre_time_ms_mean", "time_ms_mean", "time_ms_std",
)

# admissible sweep ranges (min, max) and the default grid
SWEEP_RANGES = {
    "n": ((2500, 12500), (2500, 5000, 7500, 10000, 12500)),
    "avg_in_degree": ((3, 12), (3, 6, 9, 12)),
    "p_beta": ((0.6, 0.9), (0.6, 0.7, 0.8, 0.9)),
    "num_settings": ((2, 20), (2, 5, 10, 15, 20)),
    "K": ((2, 10), (2, 4, 6, 8, 10)),
    "L": ((0.10, 0.75), (0.10, 0.25, 0.50, 0.75)),
}
SWEEP_ALIASES = {
    "d": "avg_in_degree", "degree": "avg_in_degree", "pi": "num_settings", "Pi": "num_settings",
    "horizon": "K", "budget_fraction": "L", "budget": "L",
}
_CFG_FIELD = {"n": "n", "avg_in_degree": "avg_in_degree", "p_beta": "p_beta",
              "num_settings": "num_settings", "K": "horizon", "L": "budget_fraction"}
GENERATORS = ("er", "scale-free", "file", "adversarial")


def default_epsilon(num_settings: int) -> float:
    return 1.0 / (num_settings * 1e3)


def resolve_beta(beta: Union[str, float], num_settings: int, epsilon: float) -> float:
    if beta == "one":
        return 1.0
    if beta in ("lemma5", "bicriteria"):
        return bicriteria_beta(num_settings, epsilon)
    value = float(beta)
    if value < 1.0:
        raise ParameterError(f"beta {value} < 1")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str = "er"
    sweep: Optional[str] = None
    values: Tuple = ()
    n: int = 10000
    avg_in_degree: float = 6.0
    p_beta: float = 0.8
    num_settings: int = 10
    horizon: int = 6
    budget_fraction: float = 0.25
    step_model: str = "always-K"
    algorithms: Tuple[str, ...] = ("psi-saturate", "all-greedy", "myopic", "bws", "dp-rrp")
    repeats: int = 20
    seed: int = 0
    epsilon: Optional[float] = None
    beta: Union[str, float] = "one"
    instance: Optional[str] = None
    budget: Optional[int] = None
    off_grid: bool = False
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP
    jobs: int = 1

    def __post_init__(self):
        if self.sweep is not None:
            object.__setattr__(self, "sweep", SWEEP_ALIASES.get(self.sweep, self.sweep))
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    def validate(self):
        if self.generator not in GENERATORS:
            raise ParameterError(f"unknown generator {self.generator!r}")
        if not self.algorithms:
            raise ParameterError("no algorithms selected")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ParameterError(f"unknown algorithm {a!r}")
        if self.repeats < 1:
            raise ParameterError("repeats must be >= 1")
        if self.epsilon is not None and not 0 < self.epsilon <= 1:
            raise ParameterError("epsilon must lie in (0, 1]")
        if self.beta not in ("one", "lemma5", "bicriteria"):
            resolve_beta(self.beta, 1, 1.0)
        if self.generator in ("file", "adversarial") and not self.instance:
            raise ParameterError(f"generator {self.generator!r} needs an instance path")
        if self.generator == "adversarial" and self.budget is None:
            raise ParameterError("adversarial generator needs an explicit budget")
        if self.sweep is not None:
            if self.sweep not in SWEEP_RANGES:
                raise ParameterError(f"cannot sweep {self.sweep!r}; choose from {', '.join(SWEEP_RANGES)}")
            if not self.values:
                raise ParameterError("sweep needs at least one value")
            lo, hi = SWEEP_RANGES[self.sweep][0]
            outside = [v for v in self.values if not lo <= v <= hi]
            if outside and not self.off_grid:
                raise ParameterError(
                    f"sweep values {outside} outside [{lo}, {hi}] for {self.sweep}; pass off_grid to allow"
                )
        if "brute-force" in self.algorithms and self.generator in ("er", "scale-free"):
            sizes = [self.point_config(v).n for v in self.points()]
            if max(sizes) > self.brute_force_cap:
                raise ResourceLimitError(
                    f"brute-force requested for n={max(sizes)} above the cap of {self.brute_force_cap}"
                )

    def points(self) -> List:
        return list(self.values) if self.sweep is not None else [None]

    def point_config(self, value, seed: int = 0) -> GeneratorConfig:
        cfg = GeneratorConfig(
            n=self.n, avg_in_degree=self.avg_in_degree, p_beta=self.p_beta,
            num_settings=self.num_settings, horizon=self.horizon,
            budget_fraction=self.budget_fraction, seed=seed, step_model=self.step_model,
        )
        if value is None:
            return cfg
        key = _CFG_FIELD[self.sweep]
        cast = int if key in ("n", "num_settings", "horizon") else float
        return replace(cfg, **{key: cast(value)})


def _task_seed(seed: int, point: int, repeat: int) -> int:
    return int(np.random.SeedSequence([seed, point, repeat]).generate_state(1, np.uint64)[0])


def _with_budget(inst: Instance, budget: Optional[int]) -> Instance:
    return inst if budget is None else Instance(inst.models, inst.costs, budget)


def _build(config: ExperimentConfig, value, point: int, repeat: int) -> Instance:
    if config.generator == "file":
        return _with_budget(read_instance(config.instance), config.budget)
    if config.generator == "adversarial":
        return gen_hitting_set_adversarial(read_collection(config.instance), config.budget, max(config.horizon, 2))
    cfg = config.point_config(value, _task_seed(config.seed, point, repeat))
    return generate(config.generator, cfg)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _run_task(args) -> List[dict]:
    config, point, value, repeat = args
    inst = _build(config, value, point, repeat)
    if "brute-force" in config.algorithms and inst.n > config.brute_force_cap:
        raise ResourceLimitError(f"brute-force requested for n={inst.n} above the cap of {config.brute_force_cap}")
    t0 = time.perf_counter()
    profile, _ = optimal_per_model(inst, reward_profile(inst.models))
    pre_ms = (time.perf_counter() - t0) * 1e3
    eps = config.epsilon if config.epsilon is not None else default_epsilon(inst.num_settings)
    beta = resolve_beta(config.beta, inst.num_settings, eps)
    base = {
        "generator": config.generator, "n": inst.n, "num_settings": inst.num_settings,
        "K": inst.horizon, "L": inst.budget, "repeat": repeat, "pre_time_ms": f"{pre_ms:.3f}",
        "_point": point, "_value": value,
    }
    rows = [dict(base, algorithm="pre-time", beta="", epsilon="", score="", budget_used="", time_ms="")]
    for alg in config.algorithms:
        saturating = alg in ("psi-saturate", "greedy-saturate")
        rep = solve(inst, profile, alg, epsilon=eps, beta=beta)
        rows.append(dict(
            base, algorithm=alg,
            beta=_fmt(beta) if saturating else "", epsilon=_fmt(eps) if saturating else "",
            score=repr(float(rep.score)), budget_used=rep.budget_used,
            time_ms=f"{rep.wall_time * 1e3:.3f}",
        ))
        log.info("point=%s repeat=%d %s score=%.4f", value, repeat, alg, rep.score)
    return rows


def run_rows(config: ExperimentConfig) -> List[dict]:
    """All result rows in (sweep value, repeat, algorithm) order.

    Rows carry two private keys, ``_point`` and ``_value``, used for
    aggregation and dropped on output.
    """
    config.validate()
    tasks = [(config, p, v, r) for p, v in enumerate(config.points()) for r in range(config.repeats)]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def aggregate(config: ExperimentConfig, rows: Sequence[dict]) -> List[dict]:
    """Mean (and population std) over repeats per sweep value and algorithm."""
    groups: Dict[tuple, List[dict]] = {}
    for row in rows:
        groups.setdefault((row["_point"], row["algorithm"]), []).append(row)
    out = []
    for (point, alg), grp in groups.items():
        def stat(key, fn=np.mean):
            vals = [float(r[key]) for r in grp if r[key] not in ("", None)]
            return repr(float(fn(vals))) if vals else ""

        out.append({
            "algorithm": alg, "generator": config.generator, "sweep": config.sweep or "",
            "value": "" if grp[0]["_value"] is None else grp[0]["_value"], "repeats": len(grp),
            "score_mean": stat("score"), "score_std": stat("score", np.std),
            "budget_used_mean": stat("budget_used"), "pre_time_ms_mean": stat("pre_time_ms"),
            "time_ms_mean": stat("time_ms"), "time_ms_std": stat("time_ms", np.std),
        })
    return out


def _write(path: Path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def aggregate_path(out_path) -> Path:
    p = Path(out_path)
    return p.with_name(p.stem + ".agg" + (p.suffix or ".csv"))


def run(config: ExperimentConfig, out_path) -> Path:
    """Run the sweep, write per-repeat rows to ``out_path`` and the
    per-point means next to it (``<stem>.agg.csv``); returns ``out_path``."""
    rows = run_rows(config)
    out_path = Path(out_path)
    _write(out_path, CSV_COLUMNS, rows)
    _write(aggregate_path(out_path), AGG_COLUMNS, aggregate(config, rows))
    return out_path
