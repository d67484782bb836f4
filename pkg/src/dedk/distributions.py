"""Label distributions and the analytics behind the rounding guarantees.

For labels X, Y drawn independently from a density on [0, 1], the rounding cuts
an edge with probability F(t) = P[X - Y <= t] at threshold t = (k+1)x_e - 1.  An
edge is charged at most ``alpha * (k+1) * x_e`` whenever ``F(t) <= alpha * (t+1)``,
so the quantity of interest is the supremum of F(t)/(t+1) over [-1, 1].
"""

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, cached_property
from math import comb

import numpy as np

from . import poly
from .errors import BadParams, DegeneratePiece, NumericalFailure
from .piecewise import PiecewisePoly

GRID_POINTS = 10**6
GRID_SLACK = 1e-9
ROOT_TOL = Fraction(1, 10**13)


@dataclass(frozen=True)
class IndepLabelDensity:
    """Density on [0, 1] from which every vertex label is drawn independently."""

    name: str
    density: PiecewisePoly

    def __post_init__(self):
        lo, hi = self.density.domain
        if (lo, hi) != (0, 1):
            raise BadParams(f"label density must live on [0, 1], got [{lo}, {hi}]")
        total = self.density.integral()
        if total != 1:
            raise BadParams(f"density integrates to {total}, not 1")
        for (a, b), p in zip(self.density.piece_intervals(), self.density.pieces):
            points = [a, b] + poly.isolate_real_roots(poly.deriv(p), a, b)
            if min(poly.evaluate(p, s) for s in points) < 0:
                raise BadParams(f"density {self.name!r} is negative on [{a}, {b}]")

    @cached_property
    def cdf(self):
        return self.density.antiderivative()

    @cached_property
    def _quantile_table(self):
        xs = np.union1d(np.linspace(0.0, 1.0, 4097), self.density._float_breaks)
        return xs, self.cdf(xs)

    def quantile(self, u, tol=1e-12):
        """Inverse CDF by safeguarded Newton iteration inside a bisection bracket.

        A 4096-cell CDF table gives the initial bracket; each step keeps the
        bracket and falls back to bisection whenever Newton would leave it.
        """
        u = np.asarray(u, dtype=float)
        shape = u.shape
        u = u.ravel()
        xs, cs = self._quantile_table
        j = np.clip(np.searchsorted(cs, u, side="left"), 1, len(xs) - 1)
        lo, hi = xs[j - 1].copy(), xs[j].copy()
        clo, chi = cs[j - 1], cs[j]
        span = np.where(chi > clo, chi - clo, 1.0)
        x = lo + (hi - lo) * np.clip((u - clo) / span, 0.0, 1.0)
        active = np.arange(len(u))
        for _ in range(100):
            xa, la, ha, ua = x[active], lo[active], hi[active], u[active]
            f = self.cdf(xa) - ua
            la = np.where(f <= 0, xa, la)
            ha = np.where(f >= 0, xa, ha)
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = xa - f / self.density(xa)
            inside = (newton >= la) & (newton <= ha) & np.isfinite(newton)
            x_new = np.where(inside, newton, 0.5 * (la + ha))
            x_new = np.where(f == 0, xa, x_new)
            done = (np.abs(x_new - xa) <= 0.1 * tol) | (ha - la <= tol)
            x[active], lo[active], hi[active] = x_new, la, ha
            active = active[~done]
            if active.size == 0:
                break
        x = np.clip(x, 0.0, 1.0)
        return float(x[0]) if shape == () else x.reshape(shape)


@dataclass(frozen=True)
class AtomicLabels:
    """Uniform labels on the grid {0, 1/r, ..., 1}."""

    r: int

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise BadParams(f"discrete label grid needs integer r >= 1, got {self.r}")

    @property
    def name(self):
        return f"discrete_r({self.r})"

    @property
    def support(self):
        return tuple(Fraction(i, self.r) for i in range(self.r + 1))

    @cached_property
    def difference_pmf(self):
        """Exact pmf of X - Y by enumerating all (r+1)^2 label pairs."""
        w = Fraction(1, (self.r + 1) ** 2)
        pmf = {}
        for x in self.support:
            for y in self.support:
                pmf[x - y] = pmf.get(x - y, Fraction(0)) + w
        return dict(sorted(pmf.items()))

    def difference_cdf_at(self, t):
        t = Fraction(t)
        return sum((p for z, p in self.difference_pmf.items() if z <= t), Fraction(0))


def uniform_density():
    return IndepLabelDensity("uniform", PiecewisePoly((0, 1), ((1,),)))


def poly_d_density():
    """The refined density 2/3 + (23/3)(1 - 2x)^22, expanded exactly."""
    bump = poly.scale(poly.power(poly.as_poly([1, -2]), 22), Fraction(23, 3))
    p = poly.add(bump, (Fraction(2, 3),))
    return IndepLabelDensity("polyD", PiecewisePoly((0, 1), (p,)))


@cache
def builtin_densities():
    return {"uniform": uniform_density(), "polyD": poly_d_density()}


def discrete_r(r):
    return AtomicLabels(r)


# --- difference CDF -----------------------------------------------------------


def _shifted_power_table(n):
    """(y + t)^k as coefficient grids c[i][j] of y^i t^j, for k = 0..n."""
    return [[comb(k, i) for i in range(k + 1)] for k in range(n + 1)]


def _integrate_strip(dens_piece, cdf_piece, lower, upper):
    """Integrate dens(y) * cdf(y + t) dy between two linear limits in t.

    ``lower``/``upper`` are (alpha, beta) for y = alpha + beta*t.  ``cdf_piece``
    is a polynomial in its own argument, or None for the constant 1.  Returns a
    polynomial in t.
    """
    # integrand as coefficients by power of y, each a polynomial in t
    if cdf_piece is None:
        by_y = [(c,) if c else () for c in dens_piece]
    else:
        shifted = [()] * len(cdf_piece)
        binom = _shifted_power_table(len(cdf_piece) - 1)
        for k, ck in enumerate(cdf_piece):
            if ck == 0:
                continue
            for i in range(k + 1):
                term = [poly.ZERO] * (k - i + 1)
                term[k - i] = ck * binom[k][i]
                shifted[i] = poly.add(shifted[i], tuple(term))
        by_y = [()] * (len(dens_piece) + len(shifted) - 1)
        for j, dj in enumerate(dens_piece):
            if dj == 0:
                continue
            for i, si in enumerate(shifted):
                if si:
                    by_y[i + j] = poly.add(by_y[i + j], poly.scale(si, dj))
    # antiderivative in y
    prim = [()] + [poly.scale(c, Fraction(1, i + 1)) for i, c in enumerate(by_y)]

    def at(limit):
        alpha, beta = limit
        lin = poly.as_poly([alpha, beta])
        acc = ()
        power = (poly.ONE,)
        for c in prim:
            if c:
                acc = poly.add(acc, poly.mul(c, power))
            power = poly.mul(power, lin)
        return acc

    return poly.sub(at(upper), at(lower))


def difference_cdf(density):
    """Exact CDF of X - Y for X, Y i.i.d. with the given label density.

    F(t) = integral over y of d(y) * D(clamp(y + t, 0, 1)) dy, where D is the
    CDF of d.  On each t-interval between consecutive differences of density
    breakpoints the integration limits are fixed linear functions of t, so every
    piece comes out as an exact polynomial.
    """
    d = density.density
    cdf = density.cdf
    s = d.breakpoints
    diffs = sorted({b - a for a in s for b in s})
    t_breaks = [t for t in diffs if -1 <= t <= 1]

    # x-regions for the argument of D: (0 .. s_1), ..., (s_{r-1} .. 1), then (1 .. 2)
    regions = [(a, b, p) for (a, b), p in zip(cdf.piece_intervals(), cdf.pieces)]
    regions.append((Fraction(1), Fraction(2), None))

    pieces = []
    for t0, t1 in zip(t_breaks, t_breaks[1:]):
        tm = (t0 + t1) / 2
        total = ()
        for (ya, yb), dp in zip(d.piece_intervals(), d.pieces):
            for xa, xb, cp in regions:
                # y in [max(ya, xa - t), min(yb, xb - t)]
                lower = (ya, 0) if ya >= xa - tm else (xa, -1)
                upper = (yb, 0) if yb <= xb - tm else (xb, -1)
                if lower[0] + lower[1] * tm >= upper[0] + upper[1] * tm:
                    continue
                total = poly.add(total, _integrate_strip(dp, cp, lower, upper))
        pieces.append(total)

    # merge neighbouring pieces carrying the same polynomial
    bps, merged = [t_breaks[0]], []
    for t1, p in zip(t_breaks[1:], pieces):
        if merged and merged[-1] == p:
            bps[-1] = t1
        else:
            merged.append(p)
            bps.append(t1)
    return PiecewisePoly(tuple(bps), tuple(merged), below=0, above=1)


def uniform_pm1_cdf():
    """CDF (t + 1)/2 of Uniform(-1, 1), the target a 0.5 ratio would need."""
    return PiecewisePoly((-1, 1), ((Fraction(1, 2), Fraction(1, 2)),), below=0, above=1)


# --- sup ratio ----------------------------------------------------------------


def _ratio_exact(p, t):
    """Exact p(t)/(t+1), using the limit p'(-1) at t = -1 when p(-1) = 0."""
    if t == -1:
        if poly.evaluate(p, t) != 0:
            raise NumericalFailure("CDF has an atom at -1; ratio is unbounded")
        return poly.evaluate(poly.deriv(p), t)
    return poly.evaluate(p, t) / (t + 1)


def ratio_curve(F, t):
    """Float F(t)/(t+1), with the t -> -1 limit filled in."""
    t = np.asarray(t, dtype=float)
    vals = np.asarray(F(t), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = vals / (t + 1.0)
    at_left = t <= -1.0
    if np.any(at_left):
        out = np.where(at_left, float(_ratio_exact(F.pieces[0], Fraction(-1))), out)
    return out


def grid_max_ratio(F, n=GRID_POINTS):
    """Largest F(t)/(t+1) on the grid t_i = -1 + 2i/n, i = 0..n."""
    t = np.linspace(-1.0, 1.0, n + 1)
    vals = ratio_curve(F, t)
    i = int(np.argmax(vals))
    return float(t[i]), float(vals[i])


@dataclass(frozen=True)
class RatioMax:
    t_star: float
    alpha: float
    alpha_exact: Fraction = field(repr=False)
    t_star_exact: Fraction = field(repr=False)
    grid_max: float

    def __iter__(self):
        yield self.t_star
        yield self.alpha


def sup_ratio(F, grid_points=GRID_POINTS):
    """Maximise F(t)/(t+1) over [-1, 1].

    Per piece, the stationary points are the roots of F'(t)(t+1) - F(t); they
    are isolated exactly and refined to 1e-13.  Candidates (piece endpoints and
    stationary points, in increasing t) are compared in exact arithmetic and the
    first maximum wins.  The result is then checked against a dense float grid,
    since an error there means the isolation missed something.

    Unpacks as ``t_star, alpha``.
    """
    for a, b in F.piece_intervals():
        if not a < b:
            raise DegeneratePiece(f"zero-width piece at {a}")
    lo, hi = F.domain
    if (lo, hi) != (-1, 1):
        raise BadParams(f"expected a difference CDF on [-1, 1], got [{lo}, {hi}]")

    best_t, best_v = None, None
    for (a, b), p in zip(F.piece_intervals(), F.pieces):
        numer = poly.sub(poly.mul(poly.deriv(p), (poly.ONE, poly.ONE)), p)
        candidates = [a] + poly.isolate_real_roots(numer, a, b, tol=ROOT_TOL) + [b]
        for t in candidates:
            v = _ratio_exact(p, t)
            if best_v is None or v > best_v:
                best_t, best_v = t, v

    alpha = float(best_v)
    _, gmax = grid_max_ratio(F, grid_points)
    if gmax > alpha + GRID_SLACK:
        raise NumericalFailure(f"grid value {gmax!r} exceeds certified maximum {alpha!r}")
    return RatioMax(float(best_t), alpha, best_v, best_t, gmax)


def write_ratio_csv(F, path, points=2001):
    """Write columns t, F(t), F(t)/(t+1) on an even grid over [-1, 1]."""
    t = np.linspace(-1.0, 1.0, points)
    vals = F(t)
    ratio = ratio_curve(F, t)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "F(t)", "F(t)/(t+1)"])
        for row in zip(t, vals, ratio):
            w.writerow([f"{v:.12g}" for v in row])
