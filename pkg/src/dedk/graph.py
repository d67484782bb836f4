"""DAG instances, k-path separation and feasibility checks."""

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadEndpoint, BadParams, CycleDetected, KOutOfRange, NegativeCost


@dataclass(frozen=True, eq=False)
class DagInstance:
    """Edge-weighted DAG plus the path-length bound ``k`` (counted in edges).

    Build through :func:`build_instance`, which validates and computes the
    topological order.  Edge ids are positions in ``edges``; parallel edges are
    distinct objects.
    """

    n: int
    edges: tuple  # ((u, v, cost), ...)
    k: int
    order: tuple = field(repr=False)
    bipartite_parts: tuple = field(default=None, repr=False)

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def tails(self):
        return np.array([e[0] for e in self.edges], dtype=np.intp)

    @cached_property
    def heads(self):
        return np.array([e[1] for e in self.edges], dtype=np.intp)

    @cached_property
    def costs(self):
        return np.array([e[2] for e in self.edges], dtype=float)

    @cached_property
    def _head_matrix(self):
        h = np.zeros((self.m, self.n))
        h[np.arange(self.m), self.heads] = 1.0
        return h

    @cached_property
    def in_edges(self):
        out = [[] for _ in range(self.n)]
        for i, (_, v, _) in enumerate(self.edges):
            out[v].append(i)
        return out

    @cached_property
    def out_edges(self):
        out = [[] for _ in range(self.n)]
        for i, (u, _, _) in enumerate(self.edges):
            out[u].append(i)
        return out

    def cost_of(self, edge_ids):
        return float(sum(self.edges[i][2] for i in edge_ids))

    def __eq__(self, other):
        if not isinstance(other, DagInstance):
            return NotImplemented
        return (self.n, self.edges, self.k) == (other.n, other.edges, other.k)

    def __hash__(self):
        return hash((self.n, self.edges, self.k))


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple
    edges: tuple
    weight: float


def build_instance(n, edges, k, bipartite_parts=None):
    """Validate a raw edge list and return an immutable :class:`DagInstance`."""
    if int(n) != n or n < 1:
        raise BadParams(f"vertex count must be a positive integer, got {n}")
    n = int(n)
    if int(k) != k or not 1 <= k <= n - 1:
        raise KOutOfRange(f"k={k} must satisfy 1 <= k <= n-1 = {n - 1}")
    clean = []
    for i, e in enumerate(edges):
        u, v, c = e
        if int(u) != u or int(v) != v or not (0 <= u < n and 0 <= v < n):
            raise BadEndpoint(f"edge {i} ({u}, {v}) has an endpoint outside [0, {n})")
        c = float(c)
        if not math.isfinite(c):
            raise NegativeCost(f"edge {i} has non-finite cost {c}")
        if c < 0:
            raise NegativeCost(f"edge {i} has negative cost {c}")
        clean.append((int(u), int(v), c))
    order = topological_order(n, clean)
    return DagInstance(n, tuple(clean), int(k), tuple(order), bipartite_parts)


def topological_order(n, edges):
    """Kahn's algorithm, always releasing the smallest ready vertex first."""
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for u, v, _ in edges:
        if u == v:
            raise CycleDetected(f"self-loop at vertex {u}")
        succ[u].append(v)
        indeg[v] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != n:
        raise CycleDetected("edge list contains a directed cycle")
    return order


def min_weight_k_path(inst, x, alive=None):
    """Path with exactly k edges minimising the total of ``x``, or None.

    Layered DP: best[j][v] is the lightest j-edge path ending at v, taken over
    in-edges of v; ties go to the smallest edge id.  ``alive`` optionally masks
    out deleted edges.  O(k * m log m) through vectorised group minima.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.m,):
        raise ValueError(f"x has shape {x.shape}, expected ({inst.m},)")
    if inst.m == 0:
        return None
    k, n = inst.k, inst.n
    tails, heads = inst.tails, inst.heads
    eids = np.arange(inst.m)
    w = x if alive is None else np.where(alive, x, np.inf)

    best = np.zeros(n)
    preds = []
    for _ in range(k):
        cand = best[tails] + w
        order = np.lexsort((eids, cand, heads))
        h_sorted = heads[order]
        first = np.ones(len(order), dtype=bool)
        first[1:] = h_sorted[1:] != h_sorted[:-1]
        winners = order[first]
        nxt = np.full(n, np.inf)
        pred = np.full(n, -1, dtype=np.intp)
        nxt[heads[winners]] = cand[winners]
        pred[heads[winners]] = winners
        pred[~np.isfinite(nxt)] = -1
        best = nxt
        preds.append(pred)
        if not np.isfinite(best).any():
            return None

    finite = np.isfinite(best)
    if not finite.any():
        return None
    lowest = best[finite].min()
    ends = np.flatnonzero(best == lowest)
    end = min(ends, key=lambda v: preds[-1][v])

    path_edges = []
    v = end
    for pred in reversed(preds):
        e = int(pred[v])
        path_edges.append(e)
        v = inst.edges[e][0]
    path_edges.reverse()
    vertices = (inst.edges[path_edges[0]][0],) + tuple(inst.edges[e][1] for e in path_edges)
    weight = float(sum(x[e] for e in path_edges))
    return PathWitness(vertices, tuple(path_edges), weight)


def has_k_path(inst, alive):
    """Whether a k-edge path survives, for one mask (m,) or a batch (T, m).

    This is the separation DP specialised to x = 0: a j-edge path reaches v iff
    some alive in-edge leaves a vertex that a (j-1)-edge path reaches.
    """
    alive = np.asarray(alive, dtype=bool)
    single = alive.ndim == 1
    alive = np.atleast_2d(alive)
    T = alive.shape[0]
    if inst.m == 0:
        out = np.zeros(T, dtype=bool)
        return bool(out[0]) if single else out
    reach = np.ones((T, inst.n), dtype=bool)
    for _ in range(inst.k):
        through = reach[:, inst.tails] & alive
        reach = (through.astype(np.float64) @ inst._head_matrix) > 0
        if not reach.any():
            break
    out = reach.any(axis=1)
    return bool(out[0]) if single else out


def alive_mask(inst, deleted):
    alive = np.ones(inst.m, dtype=bool)
    alive[list(deleted)] = False
    return alive


def is_feasible(inst, deleted):
    """True iff deleting ``deleted`` leaves no path with k edges."""
    return not has_k_path(inst, alive_mask(inst, deleted))


def two_coloring(inst):
    """Bipartition (A', B') of the underlying undirected graph, or None."""
    adj = [[] for _ in range(inst.n)]
    for u, v, _ in inst.edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * inst.n
    for s in range(inst.n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    a = tuple(v for v in range(inst.n) if color[v] == 0)
    b = tuple(v for v in range(inst.n) if color[v] == 1)
    return a, b


def incidence(path, m):
    row = np.zeros(m)
    row[list(path.edges)] = 1.0
    return row
