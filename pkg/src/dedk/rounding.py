"""Label-based randomized rounding of the path-covering LP.

Draw a label in [0, 1] for every vertex and delete each edge (u, v) with
``label[v] - label[u] <= (k+1) x_e - 1``.  Along any k-path that survives, the
label would have to climb by more than ``(k+1) sum x_e - k >= 1``, which labels
in [0, 1] cannot do, so the output is always feasible.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from .distributions import AtomicLabels, IndepLabelDensity, builtin_densities, difference_cdf
from .errors import BadParams, InfeasibleInput, NotBipartite, NotStructured
from .graph import has_k_path, two_coloring

# Extra room on the cut threshold.  LP solutions satisfy the path rows only to
# about 1e-9; without slack, labels sitting at exactly 0 and 1 could let such a
# path through.  Any slack >= 2x the row violation restores feasibility.
CUT_SLACK = 1e-6
CHUNK = 4096


@dataclass(frozen=True)
class Independent:
    density: IndepLabelDensity

    @property
    def name(self):
        return self.density.name

    def sample(self, inst, rng, trials=1):
        return self.density.quantile(rng.random((trials, inst.n)))

    def cut_probability(self, x_e, k):
        t = (k + 1) * float(x_e) - 1.0
        if t >= 1.0:
            return 1.0
        return float(min(max(_diff_cdf(self.density)(max(t, -1.0)), 0.0), 1.0))


@dataclass(frozen=True)
class BipartiteCorrelated:
    """One shared uniform draw y; one side gets 0, the other y, by a fair coin."""

    parts: tuple

    name = "bipartite"

    def sample(self, inst, rng, trials=1):
        y = rng.random(trials)
        heads = rng.random(trials) < 0.5
        side_b = np.zeros(inst.n, dtype=bool)
        side_b[list(self.parts[1])] = True
        labels = np.where(heads[:, None] == side_b[None, :], y[:, None], 0.0)
        return labels

    def cut_probability(self, x_e, k):
        # label[v] - label[u] is Uniform(-1, 1) on every edge
        p = (k + 1) * x_e / 2
        return min(max(p, 0), 1)


@dataclass(frozen=True)
class Discrete:
    r: int

    @property
    def name(self):
        return f"discrete_r({self.r})"

    def sample(self, inst, rng, trials=1):
        return rng.integers(0, self.r + 1, size=(trials, inst.n)) / self.r

    def cut_probability(self, x_e, k):
        """Exact (a Fraction) for the threshold the float or Fraction x_e gives."""
        t = (k + 1) * Fraction(x_e) - 1
        return AtomicLabels(self.r).difference_cdf_at(t)


@cache
def _diff_cdf(density):
    return difference_cdf(density)


def independent(name_or_density="uniform"):
    if isinstance(name_or_density, IndepLabelDensity):
        return Independent(name_or_density)
    densities = builtin_densities()
    if name_or_density not in densities:
        raise BadParams(f"unknown density {name_or_density!r}; choose from {sorted(densities)}")
    return Independent(densities[name_or_density])


def bipartite_correlated(inst, parts=None):
    """Correlated labels for a bipartite instance; checks every edge crosses sides."""
    if parts is None:
        parts = inst.bipartite_parts or two_coloring(inst)
    if parts is None:
        raise NotBipartite("underlying undirected graph has an odd cycle")
    side = {v: 0 for v in parts[0]}
    side.update({v: 1 for v in parts[1]})
    for u, v, _ in inst.edges:
        if side.get(u) is None or side.get(v) is None or side[u] == side[v]:
            raise NotBipartite(f"edge ({u}, {v}) does not cross the given bipartition")
    return BipartiteCorrelated((tuple(parts[0]), tuple(parts[1])))


def discrete(r):
    AtomicLabels(r)  # validates r
    return Discrete(int(r))


def per_edge_cut_probability(dist, x_e, k):
    """Exact probability that one edge with LP value ``x_e`` is cut."""
    return dist.cut_probability(x_e, k)


@dataclass
class CutSolution:
    deleted: frozenset
    cost: float
    labels: object
    feasible: bool


def sample_labels(dist, inst, rng=None):
    rng = np.random.default_rng(rng)
    return dist.sample(inst, rng, 1)[0]


def _xvec(x):
    return np.asarray(getattr(x, "x", x), dtype=float)


def cut_mask(inst, x, labels, slack=CUT_SLACK):
    """Boolean cut decisions for one labelling (n,) or a batch (T, n)."""
    x = _xvec(x)
    labels = np.asarray(labels, dtype=float)
    threshold = (inst.k + 1) * x - 1.0 + slack
    rise = labels[..., inst.heads] - labels[..., inst.tails]
    return rise <= threshold


def cut_rule(inst, x, labels, slack=CUT_SLACK):
    """Delete every edge whose label rise is at most (k+1) x_e - 1."""
    cut = cut_mask(inst, x, labels, slack)
    if has_k_path(inst, ~cut):
        raise InfeasibleInput("a k-path survived the cut rule; x violates the path constraints")
    deleted = frozenset(np.flatnonzero(cut).tolist())
    return CutSolution(deleted, float(inst.costs[cut].sum()), np.asarray(labels, dtype=float), True)


@dataclass
class MonteCarloResult:
    best: CutSolution
    mean_cost: float
    std_error: float
    empirical_ratio: float
    trials: int


def monte_carlo_round(inst, x, dist, trials=1000, rng=None):
    """Repeat sample-and-cut; keep the cheapest solution and the cost statistics.

    ``empirical_ratio`` is mean cost / ((k+1) c(x)), NaN when c(x) = 0.
    """
    if trials < 1:
        raise BadParams("trials must be at least 1")
    rng = np.random.default_rng(rng)
    xv = _xvec(x)
    costs = np.empty(trials)
    best_cost, best_labels = np.inf, None
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        labels = dist.sample(inst, rng, size)
        cut = cut_mask(inst, xv, labels)
        if has_k_path(inst, ~cut).any():
            raise InfeasibleInput("a k-path survived the cut rule; x violates the path constraints")
        chunk_costs = cut.astype(float) @ inst.costs
        costs[done:done + size] = chunk_costs
        i = int(np.argmin(chunk_costs))
        if chunk_costs[i] < best_cost:
            best_cost, best_labels = chunk_costs[i], labels[i]
        done += size
    best = cut_rule(inst, xv, best_labels)
    mean = float(costs.mean())
    se = float(costs.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    lp_cost = float(inst.costs @ xv)
    ratio = mean / ((inst.k + 1) * lp_cost) if lp_cost > 0 else float("nan")
    return MonteCarloResult(best, mean, se, ratio, trials)


def expected_cost(inst, x, dist):
    """Exact expected rounded cost: sum of c_e times the per-edge cut probability."""
    xv = _xvec(x)
    return float(sum(c * float(dist.cut_probability(xe, inst.k)) for c, xe in zip(inst.costs, xv)))


# --- structured solutions -----------------------------------------------------

BAND_SNAP = 1e-9


def structured_level(x, k):
    """The integer r whose band [(1+1/(r+1))/(k+1), (1+1/r)/(k+1)) holds every
    positive x_e (values >= 2/(k+1) are allowed with r = 1, they are cut anyway).

    Thresholds within 1e-9 of a band edge 1/j are snapped onto it so float LP
    output lands on the side exact arithmetic would pick.
    """
    levels = set()
    for xe in _xvec(x):
        if xe <= 0:
            continue
        t = (k + 1) * xe - 1.0
        j = round(1.0 / t) if t > 0 else 0
        if j >= 1 and abs(t - 1.0 / j) <= BAND_SNAP:
            t = Fraction(1, j)
        if t >= 1:
            levels.add(1)
        elif t > 0:
            inv = 1 / Fraction(t)
            ceil = -((-inv.numerator) // inv.denominator)
            levels.add(int(ceil) - 1)
        else:
            raise NotStructured(f"x_e = {xe!r} is at or below 1/(k+1)")
    if len(levels) > 1:
        raise NotStructured(f"positive values fall in bands r = {sorted(levels)}")
    return levels.pop() if levels else 1


def structured_round(inst, x, rng=None):
    """Round with i.i.d. labels uniform on {0, 1/r, ..., 1} for the detected r."""
    r = structured_level(x, inst.k)
    return cut_rule(inst, x, sample_labels(Discrete(r), inst, rng)), r


# --- derandomization ----------------------------------------------------------


def derandomize(inst, x, dist, grid_size=64):
    """Fix labels vertex by vertex (topological order) by conditional expectations.

    Candidate labels are the density quantiles i/(grid_size-1).  For vertex v,
    in-edges already have both labels fixed (an indicator) and out-edges lead to
    unfixed heads (the marginal CDF at label + threshold); the candidate with the
    smallest conditional expected cost of those edges wins, first one on ties.
    """
    if not isinstance(dist, Independent):
        raise BadParams("derandomize needs an independent label distribution")
    if grid_size < 2:
        raise BadParams("grid_size must be at least 2")
    xv = _xvec(x)
    cdf = dist.density.cdf
    grid = dist.density.quantile(np.linspace(0.0, 1.0, grid_size))
    grid[0], grid[-1] = 0.0, 1.0
    threshold = (inst.k + 1) * xv - 1.0 + CUT_SLACK
    costs = inst.costs
    labels = np.zeros(inst.n)
    for v in inst.order:
        score = np.zeros(grid_size)
        for e in inst.in_edges[v]:
            u = inst.edges[e][0]
            score += costs[e] * (grid - labels[u] <= threshold[e])
        for e in inst.out_edges[v]:
            score += costs[e] * cdf(np.clip(grid + threshold[e], 0.0, 1.0))
        labels[v] = grid[int(np.argmin(score))]
    cut = cut_mask(inst, xv, labels)
    deleted = frozenset(np.flatnonzero(cut).tolist())
    feasible = not has_k_path(inst, ~cut)
    return CutSolution(deleted, float(costs[cut].sum()), labels, feasible)
