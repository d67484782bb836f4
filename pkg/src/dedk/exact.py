"""Ground truth at desk scale: full path enumeration and exact branch-and-bound."""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import TooManyPaths
from .graph import PathWitness, alive_mask, min_weight_k_path
from .lp import OPTIMAL, FractionalSolution
from .simplex import restricted_simplex

log = logging.getLogger(__name__)

PATH_LIMIT = 10**6


def count_k_paths(inst):
    """Number of k-edge paths, by the counting DP over topological order."""
    counts = np.ones(inst.n, dtype=object)
    for _ in range(inst.k):
        nxt = np.zeros(inst.n, dtype=object)
        for u, v, _ in inst.edges:
            nxt[v] += counts[u]
        counts = nxt
    return int(sum(counts))


def enumerate_k_paths(inst, limit=PATH_LIMIT):
    """All paths with exactly k edges, by depth-first search from each vertex."""
    total = count_k_paths(inst)
    if total > limit:
        raise TooManyPaths(f"{total} k-paths exceed the limit of {limit}")
    out = []
    k = inst.k

    def extend(vertices, edges):
        if len(edges) == k:
            out.append(PathWitness(tuple(vertices), tuple(edges), 0.0))
            return
        for e in inst.out_edges[vertices[-1]]:
            vertices.append(inst.edges[e][1])
            edges.append(e)
            extend(vertices, edges)
            vertices.pop()
            edges.pop()

    for v in inst.order:
        extend([v], [])
    return out


def full_lp(inst, limit=PATH_LIMIT):
    """The path-covering LP with every k-path row present up front."""
    paths = enumerate_k_paths(inst, limit)
    rows = np.zeros((len(paths), inst.m))
    for i, p in enumerate(paths):
        rows[i, list(p.edges)] = 1.0
    x, y = restricted_simplex(inst.costs, rows)
    x = np.clip(x, 0.0, 1.0)
    objective = float(inst.costs @ x) if inst.m else 0.0
    return FractionalSolution(x, objective, paths, 0, OPTIMAL, [objective], y)


@dataclass
class ExactResult:
    deleted: frozenset
    cost: float
    nodes_explored: int
    certified: bool = True


def _packing_bound(inst, alive, free, cost_to_go_limit):
    """Greedy edge-disjoint k-path packing over deletable edges.

    Every surviving k-path needs one of its free edges deleted, and packed paths
    share no free edge, so the cheapest free edge of each packed path adds up to
    a valid lower bound.  Returns inf when some path has no free edge at all.
    """
    weights = free.astype(float)
    avail = alive.copy()
    bound = 0.0
    while True:
        p = min_weight_k_path(inst, weights, avail)
        if p is None:
            return bound
        movable = [e for e in p.edges if free[e]]
        if not movable:
            return np.inf
        bound += min(inst.edges[e][2] for e in movable)
        if bound >= cost_to_go_limit:
            return bound
        avail[movable] = False


def exact_solve(inst, budget_nodes=1_000_000):
    """Minimum-cost deletion set, by branching on the edges of a surviving k-path.

    Child i of a node deletes the i-th free edge of the path and protects the
    ones before it, so no deletion set is visited twice.  Returns the incumbent
    with ``certified=False`` if the node budget runs out first.
    """
    best_set = frozenset(range(inst.m))
    best_cost = inst.cost_of(best_set)
    nodes = 0
    stack = [(frozenset(), frozenset(), 0.0)]  # deleted, protected, cost
    certified = True
    while stack:
        if nodes >= budget_nodes:
            certified = False
            break
        deleted, protected, cost = stack.pop()
        nodes += 1
        if cost >= best_cost:
            continue
        alive = alive_mask(inst, deleted)
        free = alive.copy()
        free[list(protected)] = False
        p = min_weight_k_path(inst, free.astype(float), alive)
        if p is None:
            best_set, best_cost = deleted, cost
            continue
        movable = [e for e in p.edges if free[e]]
        if not movable:
            continue
        if cost + _packing_bound(inst, alive, free, best_cost - cost) >= best_cost:
            continue
        children = []
        guarded = set(protected)
        for e in movable:
            children.append((deleted | {e}, frozenset(guarded), cost + inst.edges[e][2]))
            guarded.add(e)
        # cheapest deletion explored first
        stack.extend(sorted(children, key=lambda c: -c[2]))
    if not certified:
        log.warning("exact search stopped after %d nodes; result not certified", nodes)
    return ExactResult(best_set, best_cost, nodes, certified)
