"""Acceptance checks, shared by ``dedk verify`` and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on a failed
comparison, so a full run always reports every line.
"""

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from . import instances
from .certificates import CosineCertificate, consistency_residuals, lower_bound_certificate
from .errors import NotStructured
from .distributions import builtin_densities, difference_cdf, sup_ratio
from .exact import count_k_paths, exact_solve, full_lp
from .graph import is_feasible
from .lp import solve_lp
from .rounding import (
    Discrete,
    cut_mask,
    cut_rule,
    derandomize,
    discrete,
    bipartite_correlated,
    independent,
    monte_carlo_round,
    structured_level,
)

RATIO_BOUND = 0.549
SET_SIZE = 200
SET_PATH_LIMIT = 10**4
# certificate whose parameters clear 0.542 under the two-term functional
TUNED_TWO_TERM = ((1.0, 4.75), (0.29, 9.65))


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.2f} s) {self.detail}"


def _timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


# --- shared instance families -------------------------------------------------


def _small_candidate(seed):
    rng = np.random.default_rng(10_000 + seed)
    kind = seed % 3
    if kind == 0:
        n = int(rng.integers(6, 13))
        return instances.random_dag(n, float(rng.uniform(0.25, 0.55)), seed, k=int(rng.integers(2, 5)))
    if kind == 1:
        L, width = [(3, 3), (4, 3), (4, 2), (5, 2), (6, 2)][int(rng.integers(0, 5))]
        return instances.layered(L, width, float(rng.uniform(0.5, 1.0)), seed, k=int(rng.integers(2, L)))
    a, b = int(rng.integers(3, 7)), int(rng.integers(3, 7))
    return instances.bipartite(a, b, float(rng.uniform(0.3, 0.7)), seed, k=int(rng.integers(2, 5)), orient="mixed")


@cache
def small_instances(count=SET_SIZE):
    """Seeded random DAGs with n <= 12 and at most 10^4 k-paths."""
    out, seed = [], 0
    while len(out) < count:
        inst = _small_candidate(seed)
        seed += 1
        if inst.n <= 12 and count_k_paths(inst) <= SET_PATH_LIMIT:
            out.append(inst)
    return tuple(out)


@cache
def small_lp_solutions(count=SET_SIZE):
    return tuple(solve_lp(inst) for inst in small_instances(count))


# --- criteria -----------------------------------------------------------------


def check_uniform_constant():
    def run():
        res = sup_ratio(difference_cdf(builtin_densities()["uniform"]))
        err_a = abs(res.alpha - (2 - math.sqrt(2)))
        err_t = abs(res.t_star - (math.sqrt(2) - 1))
        return err_a <= 1e-9 and err_t <= 1e-9, f"alpha={res.alpha!r} t*={res.t_star!r} errors {err_a:.1e}/{err_t:.1e}"

    ok, detail, sec = _timed(run)
    return CheckResult(1, "uniform sup-ratio 2-sqrt2 at sqrt2-1, under 1 s", ok and sec < 1.0, detail, sec)


def check_polyd_constant():
    def run():
        res = sup_ratio(difference_cdf(builtin_densities()["polyD"]))
        ok = 0.5481 < res.alpha < 0.5482 and abs(res.t_star - 0.2666) <= 0.001
        return ok, f"alpha={res.alpha!r} t*={res.t_star!r}"

    ok, detail, sec = _timed(run)
    return CheckResult(2, "polyD sup-ratio in (0.5481, 0.5482), t* near 0.2666, under 10 s", ok and sec < 10.0, detail, sec)


def check_certificates():
    def run():
        one = lower_bound_certificate(CosineCertificate(((1.0, 4.5),)))
        two = lower_bound_certificate(CosineCertificate(((1.0, 4.4), (0.29, 8.9))))
        probe = CosineCertificate(((1.0, 4.4), (0.29, 8.9), (1.0, 4.5)))
        resid = max(max(consistency_residuals(probe, d)) for d in builtin_densities().values())
        tuned = lower_bound_certificate(CosineCertificate(TUNED_TWO_TERM))
        parts = {
            "(1,4.5)>0.539": one > 0.539,
            "{(1,4.4),(0.29,8.9)}>0.542": two > 0.542,
            "identity<=1e-8": resid <= 1e-8,
        }
        detail = (
            f"one-term={one:.10f} two-term={two:.10f} max identity residual={resid:.1e}; "
            + " ".join(f"{k}:{'ok' if v else 'NO'}" for k, v in parts.items())
            + f" (for reference {TUNED_TWO_TERM} gives {tuned:.10f})"
        )
        return all(parts.values()), detail

    ok, detail, sec = _timed(run)
    return CheckResult(3, "cosine certificates and the by-parts identity, under 5 s", ok and sec < 5.0, detail, sec)


def _feasibility_instances():
    return [
        instances.layered(6, 10, 0.3, seed=1, k=3),
        instances.layered(5, 12, 0.25, seed=2, k=4),
        instances.layered(8, 7, 0.35, seed=3, k=3),
        instances.layered(4, 6, 0.8, seed=4, k=2),
        instances.bipartite(25, 25, 0.12, seed=5, k=3, orient="mixed"),
        instances.bipartite(20, 30, 0.1, seed=6, k=4, orient="mixed"),
        instances.bipartite(15, 15, 0.3, seed=7, k=2, orient="mixed"),
        instances.bipartite(8, 8, 1.0, seed=8, k=1),
        instances.path(3),
        instances.path(10),
        instances.path(59),
        instances.layered(3, 20, 0.2, seed=9, k=2),
    ]


def check_feasibility(trials_per_pair=250, seed=0):
    def run():
        rng = np.random.default_rng(seed)
        total = bad = 0
        for inst in _feasibility_instances():
            sol = solve_lp(inst)
            try:
                r = structured_level(sol.x, inst.k)
            except NotStructured:
                r = 3
            for dist in (independent("uniform"), independent("polyD"), bipartite_correlated(inst), discrete(r)):
                labels = dist.sample(inst, rng, trials_per_pair)
                for row in labels:
                    cut = cut_rule(inst, sol, row)
                    total += 1
                    bad += not is_feasible(inst, cut.deleted)
        return bad == 0 and total >= 10**4, f"{total} cut solutions, {bad} infeasible"

    ok, detail, sec = _timed(run)
    return CheckResult(4, "every rounded solution is feasible (>= 10^4 trials)", ok, detail, sec)


def check_per_edge_bound():
    def run():
        worst = -np.inf
        for name in ("uniform", "polyD"):
            dist = independent(name)
            alpha = sup_ratio(difference_cdf(dist.density)).alpha
            for k in (2, 5, 10, 50):
                for xe in np.linspace(0.0, 2.0 / (k + 1), 100):
                    worst = max(worst, dist.cut_probability(xe, k) - alpha * (k + 1) * xe)
        return worst <= 1e-9, f"max excess over alpha(k+1)x_e = {worst:.3e}"

    ok, detail, sec = _timed(run)
    return CheckResult(5, "per-edge cut probability <= alpha(k+1)x_e", ok, detail, sec)


def check_bipartite_exactness(samples=10**6, seed=0):
    def run():
        exact_ok = True
        for k in (1, 2, 5, 10):
            dist = bipartite_correlated(instances.path(k))
            for i in range(101):
                xe = Fraction(2 * i, 100 * (k + 1))
                exact_ok &= dist.cut_probability(xe, k) == Fraction(k + 1) * xe / 2
        k = 3
        inst = instances.bipartite(2, 3, 1.0, seed=seed, k=k, orient="mixed")
        dist = bipartite_correlated(inst)
        x = np.linspace(0.05, 0.5, inst.m)  # all inside [0, 2/(k+1)]
        rng = np.random.default_rng(seed)
        hits = np.zeros(inst.m)
        done = 0
        while done < samples:
            size = min(200_000, samples - done)
            hits += cut_mask(inst, x, dist.sample(inst, rng, size)).sum(0)
            done += size
        dev = float(np.max(np.abs(hits / samples - 0.5 * (k + 1) * x)))
        return exact_ok and dev <= 0.002, f"analytic exact={exact_ok}; max Monte Carlo deviation {dev:.2e} over {samples} samples"

    ok, detail, sec = _timed(run)
    return CheckResult(6, "bipartite cut probability is 0.5(k+1)x_e", ok, detail, sec)


def check_structured_exactness():
    def run():
        k = 4
        wrong = []
        for r in range(1, 51):
            lo = (1 + Fraction(1, r + 1)) / (k + 1)
            hi = (1 + Fraction(1, r)) / (k + 1)
            for xe in (lo, (lo + hi) / 2, hi - Fraction(1, 10**9)):
                if Discrete(r).cut_probability(xe, k) != Fraction(r + 2, 2 * (r + 1)):
                    wrong.append(r)
        return not wrong, "all r=1..50 exact" if not wrong else f"mismatch at r={sorted(set(wrong))}"

    ok, detail, sec = _timed(run)
    return CheckResult(7, "structured labels cut with probability (r+2)/(2(r+1))", ok, detail, sec)


def check_lp_agreement():
    def run():
        worst = 0.0
        for inst, sol in zip(small_instances(), small_lp_solutions()):
            ref = full_lp(inst)
            worst = max(worst, abs(sol.objective - ref.objective) / (1 + ref.objective))
        return worst <= 1e-6, f"{SET_SIZE} instances, max relative gap {worst:.2e}"

    ok, detail, sec = _timed(run)
    return CheckResult(8, "row generation matches the full LP, under 2 min", ok and sec < 120.0, detail, sec)


def check_end_to_end_ratio(trials=1000, seed=0):
    def run():
        dist = independent("polyD")
        mc_bad = exact_bad = used = 0
        worst_exact = 0.0
        for i, (inst, sol) in enumerate(zip(small_instances(), small_lp_solutions())):
            bound = RATIO_BOUND * (inst.k + 1) * sol.objective
            ex = exact_solve(inst)
            exact_bad += not (ex.certified and ex.cost <= bound + 1e-6)
            if sol.objective > 0:
                worst_exact = max(worst_exact, ex.cost / ((inst.k + 1) * sol.objective))
                used += 1
                mc = monte_carlo_round(inst, sol, dist, trials, np.random.default_rng([seed, i]))
                slack = 3 * mc.std_error / mc.mean_cost if mc.mean_cost > 0 else 0.0
                mc_bad += not mc.mean_cost <= bound * (1 + slack)
        detail = f"{used} instances with c(x)>0; Monte Carlo violations {mc_bad}; exact violations {exact_bad}; worst OPT/((k+1)LP)={worst_exact:.4f}"
        return mc_bad == 0 and exact_bad == 0, detail

    ok, detail, sec = _timed(run)
    return CheckResult(9, "rounded and optimal cost within 0.549(k+1)c(x)", ok, detail, sec)


def check_derandomization(trials=10**4, grid=64, seed=0):
    def run():
        dist = independent("polyD")
        good = infeasible = 0
        insts = small_instances()
        for i, (inst, sol) in enumerate(zip(insts, small_lp_solutions())):
            det = derandomize(inst, sol, dist, grid)
            mc = monte_carlo_round(inst, sol, dist, trials, np.random.default_rng([seed, i]))
            infeasible += not det.feasible
            # 1e-9 relative room only absorbs float summation order
            good += det.feasible and det.cost <= mc.mean_cost + 2 * mc.std_error + 1e-9 * (1 + mc.mean_cost)
        share = good / len(insts)
        return share >= 0.95 and infeasible == 0, f"{good}/{len(insts)} within MC mean + 2se; {infeasible} infeasible"

    ok, detail, sec = _timed(run)
    return CheckResult(10, "derandomized cost <= Monte Carlo mean + 2se on >= 95%", ok, detail, sec)


CHECKS = {
    1: check_uniform_constant,
    2: check_polyd_constant,
    3: check_certificates,
    4: check_feasibility,
    5: check_per_edge_bound,
    6: check_bipartite_exactness,
    7: check_structured_exactness,
    8: check_lp_agreement,
    9: check_end_to_end_ratio,
    10: check_derandomization,
}


def run_checks(numbers=None):
    return [CHECKS[n]() for n in (numbers or sorted(CHECKS))]
