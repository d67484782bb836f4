"""Lower bounds on the best ratio any independent label density can reach.

If every edge is cut with probability at most alpha*(t+1) at threshold t, then
the centred CDF G(x) = P[Z <= x] - (x+1)/2 of Z = X - Y is pinned between
-(alpha - 1/2)(1 - x) and (alpha - 1/2)(1 + x).  For a nonnegative combination
h(z) = sum a_i cos(t_i z), E[h(Z)] = |E e^{itX}|^2-weighted sums are >= 0, and
integrating by parts turns that into

    sum a_i (-sin t_i)/t_i <= (alpha - 1/2) * integral_{-1}^{1} (|g| + x g) dx

with g(x) = sum a_i t_i sin(t_i x).  Rearranged, that is a lower bound on alpha.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCertificate

ROOT_GRID = 10_000
SIMPSON_TOL = 1e-12


def adaptive_simpson(f, a, b, tol=SIMPSON_TOL, max_depth=60):
    """Adaptive Simpson quadrature with Richardson correction."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1) + recurse(
            m, b, fm, frm, fb, right, tol / 2, depth - 1
        )

    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


@dataclass(frozen=True)
class CosineCertificate:
    """Nonnegative weights ``a_i`` on frequencies ``t_i``: h(z) = sum a_i cos(t_i z)."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(a), float(t)) for a, t in self.terms)
        if not terms:
            raise InvalidCertificate("certificate has no terms")
        for a, t in terms:
            if not a >= 0:
                raise InvalidCertificate(f"weight {a} is negative")
            if not (math.pi < t < 2 * math.pi or t > 2 * math.pi):
                raise InvalidCertificate(f"frequency {t} outside (pi, 2pi) u (2pi, inf)")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text):
        """Parse ``"a:t,a:t,..."``."""
        try:
            pairs = [item.split(":") for item in text.split(",") if item.strip()]
            return cls(tuple((float(a), float(t)) for a, t in pairs))
        except ValueError as exc:
            if isinstance(exc, InvalidCertificate):
                raise
            raise InvalidCertificate(f"cannot parse certificate terms {text!r}") from exc

    def g(self, x):
        return sum(a * t * np.sin(t * x) for a, t in self.terms)

    def numerator(self):
        return sum(a * (-math.sin(t)) / t for a, t in self.terms)


def _bisect_root(f, lo, hi, flo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_change_points(f, a, b, grid=ROOT_GRID):
    """Zeros of ``f`` on [a, b], bracketed on a uniform grid then bisected."""
    xs = np.linspace(a, b, grid + 1)
    vals = np.array([f(x) for x in xs])
    roots = [float(x) for x, v in zip(xs[1:-1], vals[1:-1]) if v == 0]
    for i in range(grid):
        v0, v1 = vals[i], vals[i + 1]
        if v0 != 0 and v1 != 0 and (v0 > 0) != (v1 > 0):
            roots.append(_bisect_root(f, float(xs[i]), float(xs[i + 1]), v0))
    return sorted(roots)


def denominator(cert):
    """Integral over [-1, 1] of |g(x)| + x g(x), split at the sign changes of g."""
    g = cert.g
    cuts = [-1.0] + sign_change_points(g, -1.0, 1.0) + [1.0]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        s = 1.0 if g(0.5 * (lo + hi)) >= 0 else -1.0
        total += adaptive_simpson(lambda x, s=s: (s + x) * g(x), lo, hi)
    return total


def lower_bound_certificate(cert):
    """The bound 1/2 + N/Dn that the certificate forces on every independent density."""
    n = cert.numerator()
    if not n > 0:
        raise InvalidCertificate(f"numerator {n!r} is not positive; certificate proves nothing")
    return 0.5 + n / denominator(cert)


def single_frequency_bound(t):
    """The closed form 1/2 + (-sin t)/(6t + 2 sin t) for one cosine."""
    return 0.5 + (-math.sin(t)) / (6 * t + 2 * math.sin(t))


def gauss_legendre(f, a, b, panels=16, nodes=32):
    """Composite Gauss-Legendre rule with a vectorized integrand."""
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    pts = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
    wts = (half[:, None] * ws[None, :]).ravel()
    return float(wts @ f(pts))


def characteristic_sq(density, t):
    """E[cos tX]^2 + E[sin tX]^2 for X with the given label density."""
    c = s = 0.0
    for lo, hi in density.density.piece_intervals():
        lo, hi = float(lo), float(hi)
        c += gauss_legendre(lambda x: density.density(x) * np.cos(t * x), lo, hi)
        s += gauss_legendre(lambda x: density.density(x) * np.sin(t * x), lo, hi)
    return c * c + s * s


def cos_moment_by_parts(F, t):
    """E[cos tZ] via cos t + t * integral_{-1}^{1} sin(tx) F(x) dx."""
    total = 0.0
    for lo, hi in F.piece_intervals():
        total += gauss_legendre(lambda x: np.sin(t * x) * F(x), float(lo), float(hi))
    return math.cos(t) + t * total


def certificate_consistency_check(cert, density, F=None, tol=1e-8):
    """Check the integration-by-parts identity for each certificate frequency."""
    return max(consistency_residuals(cert, density, F)) <= tol


def consistency_residuals(cert, density, F=None):
    from .distributions import difference_cdf

    if F is None:
        F = difference_cdf(density)
    return [abs(cos_moment_by_parts(F, t) - characteristic_sq(density, t)) for _, t in cert.terms]
