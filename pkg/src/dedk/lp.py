"""Path-covering LP relaxation solved by row generation.

    min  sum_e c_e x_e
    s.t. sum_{e in P} x_e >= 1   for every path P with exactly k edges
         x >= 0

Longer paths need no rows of their own: each contains a k-edge subpath.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure
from .graph import incidence, min_weight_k_path
from .simplex import CoveringSimplex

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
ITERATION_LIMIT = "iteration-limit"
FEASIBILITY_TOL = 1e-7


@dataclass
class FractionalSolution:
    x: np.ndarray
    objective: float
    active_constraints: list
    iterations: int
    status: str
    history: list = field(default_factory=list, repr=False)
    duals: np.ndarray = field(default=None, repr=False)


def _finish(inst, lp, paths, rounds, status, history):
    x = np.clip(lp.primal(), 0.0, 1.0)
    return FractionalSolution(
        x=x,
        objective=float(inst.costs @ x) if inst.m else 0.0,
        active_constraints=list(paths),
        iterations=rounds,
        status=status,
        history=history,
        duals=lp.dual(),
    )


def solve_lp(inst, max_rounds=None, tol=1e-9):
    """Cutting-plane solve of the path-covering LP.

    Each round re-optimises the restricted master and asks the separation DP for
    the lightest k-path; if it weighs less than ``1 - tol`` it becomes a new row.
    ``history`` records the master objective after every round, which never
    decreases.  Hitting ``max_rounds`` (default 10*m) returns the last restricted
    solution with status ``iteration-limit``.
    """
    if max_rounds is None:
        max_rounds = max(10 * inst.m, 1)
    lp = CoveringSimplex(inst.costs, tol=tol)
    paths, seen, history = [], set(), []
    rebuilt = False

    for rounds in range(max_rounds + 1):
        lp.solve()
        history.append(lp.objective())
        x = lp.primal()
        witness = min_weight_k_path(inst, x)
        if witness is None or witness.weight >= 1.0 - tol:
            return _finish(inst, lp, paths, rounds, OPTIMAL, history)
        if rounds == max_rounds:
            break
        if witness.edges in seen:
            # drift in the warm-started tableau; rebuild it once from the rows
            if rebuilt:
                raise NumericalFailure(f"separation keeps returning path {witness.edges}")
            log.debug("rebuilding master after %d rounds", rounds)
            lp = CoveringSimplex(inst.costs, tol=tol)
            for p in paths:
                lp.add_row(incidence(p, inst.m))
            rebuilt = True
            continue
        seen.add(witness.edges)
        paths.append(witness)
        lp.add_row(incidence(witness, inst.m))

    log.warning("row generation stopped at the round limit (%d)", max_rounds)
    return _finish(inst, lp, paths, max_rounds, ITERATION_LIMIT, history)
