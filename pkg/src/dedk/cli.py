"""Command-line entry point: ``dedk {solve,round,exact,analyze-dist,lower-bound,verify}``."""

import argparse
import json
import math
import sys
import time

import numpy as np

from . import instances
from .certificates import CosineCertificate, lower_bound_certificate
from .distributions import builtin_densities, difference_cdf, sup_ratio, write_ratio_csv
from .errors import BadParams, BudgetExceeded, DedError, NotStructured
from .exact import exact_solve
from .graph import is_feasible
from .lp import solve_lp
from .rounding import (
    Discrete,
    bipartite_correlated,
    derandomize,
    independent,
    monte_carlo_round,
    structured_level,
)
from .verify import run_checks

DENSITY_NAMES = {"uniform": "uniform", "polyd": "polyD"}


def _load(args):
    if args.input:
        return instances.parse_instance(args.input)
    return instances.generate(args.gen)


def _number(v):
    # JSON has no NaN or infinity; those are reported as null
    return None if v is None or not math.isfinite(v) else v


def _report(args, inst, lp, method, cost, status, deleted, started, extra=None):
    ratio = cost / ((inst.k + 1) * lp.objective) if lp.objective > 0 else float("nan")
    report = {
        "instance": {"n": inst.n, "m": inst.m, "k": inst.k},
        "lp_objective": lp.objective,
        "method": method,
        "cost": cost,
        "ratio": _number(ratio),
        "deleted": sorted(deleted),
        "seed": args.seed,
        "status": status,
        "wall_time": round(time.perf_counter() - started, 6) if args.timing else None,
    }
    report.update(extra or {})
    return report


def _emit(args, payload):
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    sys.stdout.write(text)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def cmd_solve(args):
    started = time.perf_counter()
    inst = _load(args)
    lp = solve_lp(inst)
    payload = _report(args, inst, lp, "lp", lp.objective, lp.status, [], started,
                      {"x": [float(v) for v in lp.x], "rounds": lp.iterations})
    _emit(args, payload)
    return 0


def _round_dist(args, inst, lp):
    if args.dist == "bipartite":
        return bipartite_correlated(inst)
    if args.dist == "auto-structured":
        try:
            return Discrete(structured_level(lp.x, inst.k))
        except NotStructured:
            return independent("polyD")
    return independent(DENSITY_NAMES[args.dist])


def cmd_round(args):
    started = time.perf_counter()
    inst = _load(args)
    lp = solve_lp(inst)
    dist = _round_dist(args, inst, lp)
    if args.derandomize:
        if args.dist not in DENSITY_NAMES and not (args.dist == "auto-structured" and dist.name == "polyD"):
            raise BadParams("--derandomize needs an independent density (uniform or polyd)")
        sol = derandomize(inst, lp, dist, args.grid)
        method = f"derandomize:{dist.name}:grid={args.grid}"
        extra = {}
    else:
        mc = monte_carlo_round(inst, lp, dist, args.trials, np.random.default_rng(args.seed))
        sol = mc.best
        method = f"round:{dist.name}:trials={args.trials}"
        extra = {"mean_cost": mc.mean_cost, "std_error": _number(mc.std_error),
                 "empirical_ratio": _number(mc.empirical_ratio)}
    feasible = is_feasible(inst, sol.deleted)
    status = "ok" if feasible else "infeasible"
    _emit(args, _report(args, inst, lp, method, sol.cost, status, sol.deleted, started, extra))
    return 0 if feasible else 3


def cmd_exact(args):
    started = time.perf_counter()
    inst = _load(args)
    lp = solve_lp(inst)
    res = exact_solve(inst, args.budget)
    status = "optimal" if res.certified else "budget-exceeded"
    _emit(args, _report(args, inst, lp, "exact", res.cost, status, res.deleted, started,
                        {"nodes_explored": res.nodes_explored}))
    if not res.certified:
        raise BudgetExceeded(f"search stopped after {res.nodes_explored} nodes; incumbent cost {res.cost}")
    return 0


def cmd_analyze_dist(args):
    if args.dist not in DENSITY_NAMES:
        raise BadParams("analyze-dist needs --dist uniform or polyd")
    F = difference_cdf(builtin_densities()[DENSITY_NAMES[args.dist]])
    res = sup_ratio(F)
    if args.csv:
        write_ratio_csv(F, args.csv)
    _emit(args, {"dist": DENSITY_NAMES[args.dist], "alpha": res.alpha, "t_star": res.t_star,
                 "grid_max": res.grid_max})
    return 0


def cmd_lower_bound(args):
    cert = CosineCertificate.parse(args.terms)
    _emit(args, {"terms": [list(t) for t in cert.terms], "bound": lower_bound_certificate(cert)})
    return 0


def cmd_verify(args):
    numbers = [int(s) for s in args.only.split(",")] if args.only else None
    results = run_checks(numbers)
    for r in results:
        print(r.line(), flush=True)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="dedk", description="DAG k-path edge deletion by label rounding.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instance(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="PATH", help="instance file: 'n m k' then m lines 'u v c'")
        src.add_argument("--gen", metavar="SPEC", help="generator, e.g. layered:L=4,width=3,density=1,seed=7")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--report", metavar="PATH", help="also write the JSON report here")
        p.add_argument("--timing", action="store_true", help="record wall time in the report")
        return p

    with_instance(sub.add_parser("solve", help="solve the path-covering LP")).set_defaults(func=cmd_solve)

    p = with_instance(sub.add_parser("round", help="solve the LP and round it"))
    p.add_argument("--dist", default="polyd", choices=["uniform", "polyd", "bipartite", "auto-structured"])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--derandomize", action="store_true")
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_round)

    p = with_instance(sub.add_parser("exact", help="exact optimum by branch-and-bound"))
    p.add_argument("--budget", type=int, default=1_000_000, help="node budget")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("analyze-dist", help="sup-ratio of a label density")
    p.add_argument("--dist", default="polyd", choices=sorted(DENSITY_NAMES))
    p.add_argument("--csv", metavar="PATH", help="write t, F(t), F(t)/(t+1)")
    p.add_argument("--report", metavar="PATH")
    p.set_defaults(func=cmd_analyze_dist)

    p = sub.add_parser("lower-bound", help="evaluate a cosine certificate")
    p.add_argument("--terms", required=True, help='"a:t,a:t,..."')
    p.add_argument("--report", metavar="PATH")
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", metavar="LIST", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DedError as exc:
        line = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        sys.stderr.write(json.dumps(line, sort_keys=True) + "\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "OSError", "message": str(exc), "exit_code": 2}, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
