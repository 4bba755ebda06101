"""Command-line entry point: ``rrp-bench {run,solve,generate}``.

Exit status: 0 on success, 1 on file or format errors, 2 on usage errors,
3 when a solver refuses an instance as too large.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys

from .errors import InstanceFormatError, ParameterError, ResourceLimitError, ValidationError
from .generators import GeneratorConfig, gen_hitting_set_adversarial, generate, read_collection
from .harness import GENERATORS, ExperimentConfig, default_epsilon, resolve_beta, run
from .io import read_instance, write_instance
from .mobility import reward_profile
from .solvers import ALGORITHMS, REPORT_COLUMNS, optimal_per_model, solve

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _sweep(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected NAME=v1,v2,...")
    name, vals = text.split("=", 1)
    try:
        values = tuple(float(v) for v in vals.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sweep values {vals!r}") from None
    return name.strip(), tuple(int(v) if v.is_integer() and name.strip() != "L" else v for v in values)


def _algorithms(text):
    algs = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in algs if a not in ALGORITHMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {', '.join(bad)}; choose from {', '.join(ALGORITHMS)}")
    return algs


def _beta(text):
    if text in ("one", "lemma5", "bicriteria"):
        return "lemma5" if text == "bicriteria" else text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("beta must be 'one', 'lemma5' (alias 'bicriteria') or a number >= 1") from None
    if value < 1:
        raise argparse.ArgumentTypeError("beta must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rrp-bench", description="Robust reward placement experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a parameter sweep and write CSV")
    r.add_argument("--generator", choices=GENERATORS, default="er")
    r.add_argument("--sweep", type=_sweep, help="NAME=v1,v2,... over n, avg_in_degree, p_beta, num_settings, K, L")
    r.add_argument("--off-grid", action="store_true", help="allow sweep values outside the standard ranges")
    r.add_argument("--n", type=int, default=10000)
    r.add_argument("--avg-in-degree", type=float, default=6.0)
    r.add_argument("--p-beta", type=float, default=0.8)
    r.add_argument("--num-settings", type=int, default=10)
    r.add_argument("--horizon", type=int, default=6)
    r.add_argument("--budget-fraction", type=float, default=0.25)
    r.add_argument("--budget", type=int, help="absolute budget for file/adversarial instances")
    r.add_argument("--step-model", choices=("always-K", "uniform-steps"), default="always-K")
    r.add_argument("--algorithms", type=_algorithms, default=("psi-saturate", "all-greedy", "myopic", "bws", "dp-rrp"))
    r.add_argument("--repeats", type=int, default=20)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--epsilon", type=float)
    r.add_argument("--beta", type=_beta, default="one", help="one: 1; lemma5 (or bicriteria): 1 + ln(3 |Pi| / eps); or a number >= 1")
    r.add_argument("--instance", help="instance JSON (file) or subset collection (adversarial)")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="solve one instance file and print the report row")
    s.add_argument("--instance", required=True)
    s.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--beta", type=_beta, default="one", help="one: 1; lemma5 (or bicriteria): 1 + ln(3 |Pi| / eps); or a number >= 1")
    s.add_argument("--budget", type=int, help="override the file's budget")

    g = sub.add_parser("generate", help="write a generated instance as JSON")
    g.add_argument("--generator", choices=("er", "scale-free", "adversarial"), default="er")
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--avg-in-degree", type=float, default=6.0)
    g.add_argument("--p-beta", type=float, default=0.8)
    g.add_argument("--num-settings", type=int, default=10)
    g.add_argument("--horizon", type=int, default=6)
    g.add_argument("--budget-fraction", type=float, default=0.25)
    g.add_argument("--budget", type=int, help="budget for adversarial instances")
    g.add_argument("--step-model", choices=("always-K", "uniform-steps"), default="always-K")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--collection", help="subset collection for the adversarial generator")
    g.add_argument("--out", required=True)
    return parser


def solve_file(instance_path, algorithm, epsilon=None, beta="one", budget=None, out=sys.stdout):
    """Load an instance, run one algorithm and print its CSV row and members."""
    inst = read_instance(instance_path)
    if budget is not None:
        from .mobility import Instance

        inst = Instance(inst.models, inst.costs, budget)
    profile, _ = optimal_per_model(inst, reward_profile(inst.models))
    eps = epsilon if epsilon is not None else default_epsilon(inst.num_settings)
    b = resolve_beta(beta, inst.num_settings, eps)
    rep = solve(inst, profile, algorithm, epsilon=eps, beta=b)
    w = csv.DictWriter(out, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerow(rep.as_row(inst))
    print("members: " + " ".join(str(s) for s in rep.placement.members), file=out)
    if rep.flags:
        print("flags: " + " ".join(rep.flags), file=out)
    return rep


def _generate(args):
    if args.generator == "adversarial":
        if not args.collection or args.budget is None:
            raise ParameterError("adversarial generation needs --collection and --budget")
        inst = gen_hitting_set_adversarial(read_collection(args.collection), args.budget, max(args.horizon, 2))
    else:
        cfg = GeneratorConfig(
            n=args.n, avg_in_degree=args.avg_in_degree, p_beta=args.p_beta, num_settings=args.num_settings,
            horizon=args.horizon, budget_fraction=args.budget_fraction, seed=args.seed, step_model=args.step_model,
        )
        inst = generate(args.generator, cfg)
    write_instance(inst, args.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "run":
            sweep, values = args.sweep if args.sweep else (None, ())
            cfg = ExperimentConfig(
                generator=args.generator, sweep=sweep, values=values, n=args.n,
                avg_in_degree=args.avg_in_degree, p_beta=args.p_beta, num_settings=args.num_settings,
                horizon=args.horizon, budget_fraction=args.budget_fraction, step_model=args.step_model,
                algorithms=args.algorithms, repeats=args.repeats, seed=args.seed, epsilon=args.epsilon,
                beta=args.beta, instance=args.instance, budget=args.budget, off_grid=args.off_grid,
                jobs=args.jobs,
            )
            run(cfg, args.out)
        elif args.command == "solve":
            solve_file(args.instance, args.algorithm, args.epsilon, args.beta, args.budget)
        else:
            _generate(args)
    except ResourceLimitError as exc:
        print(f"rrp-bench: refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InstanceFormatError, ValidationError, OSError) as exc:
        print(f"rrp-bench: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParameterError as exc:
        print(f"rrp-bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
