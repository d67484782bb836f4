"""Piecewise polynomials with exact rational coefficients."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from numpy.polynomial import chebyshev

from . import poly
from .errors import DegeneratePiece


@dataclass(frozen=True)
class PiecewisePoly:
    """A function on ``[t_0, t_r]`` that is a polynomial on each ``[t_i, t_{i+1})``.

    Coefficients are exact and in absolute coordinates (powers of ``t``, not of
    ``t - t_i``).  Float evaluation goes through a per-piece Chebyshev expansion on
    the rescaled piece, which keeps rounding error near machine precision even for
    the degree-46 difference CDFs whose power-basis coefficients run into the
    billions.

    ``below`` / ``above`` give the value outside the domain; ``None`` means hold
    the endpoint value (what a CDF wants).
    """

    breakpoints: tuple
    pieces: tuple
    below: object = None
    above: object = None

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        pieces = tuple(poly.as_poly(p) for p in self.pieces)
        if len(bps) != len(pieces) + 1:
            raise ValueError("need exactly one more breakpoint than pieces")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise DegeneratePiece(f"breakpoints must increase strictly, got {a} then {b}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_intervals(self):
        return list(zip(self.breakpoints, self.breakpoints[1:]))

    def _index(self, t):
        """Piece index for an exact point (left-closed pieces, last one closed)."""
        bps = self.breakpoints
        for i in range(len(self.pieces) - 1, -1, -1):
            if t >= bps[i]:
                return i
        return 0

    def exact(self, t):
        """Exact value at a rational point."""
        t = Fraction(t)
        lo, hi = self.domain
        if t < lo:
            return self.exact(lo) if self.below is None else Fraction(self.below)
        if t > hi:
            return self.exact(hi) if self.above is None else Fraction(self.above)
        return poly.evaluate(self.pieces[self._index(t)], t)

    @cached_property
    def _float_breaks(self):
        return np.array([float(b) for b in self.breakpoints])

    @cached_property
    def _cheb(self):
        out = []
        for (a, b), p in zip(self.piece_intervals(), self.pieces):
            mid, half = (a + b) / 2, (b - a) / 2
            local = poly.compose_linear(p, mid, half)
            coeffs = poly.to_chebyshev(local) or (Fraction(0),)
            out.append((float(mid), float(half), np.array([float(c) for c in coeffs])))
        return out

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        bps = self._float_breaks
        idx = np.clip(np.searchsorted(bps, t_arr, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty_like(t_arr)
        for i, (mid, half, coeffs) in enumerate(self._cheb):
            mask = idx == i
            if mask.any():
                u = np.clip((t_arr[mask] - mid) / half, -1.0, 1.0)
                out[mask] = chebyshev.chebval(u, coeffs)
        lo, hi = bps[0], bps[-1]
        if self.below is not None:
            out[t_arr < lo] = float(self.below)
        if self.above is not None:
            out[t_arr > hi] = float(self.above)
        return float(out[0]) if scalar else out

    def derivative(self):
        return PiecewisePoly(self.breakpoints, tuple(poly.deriv(p) for p in self.pieces), 0, 0)

    def antiderivative(self):
        """Continuous antiderivative that is 0 at the left end of the domain."""
        pieces = []
        offset = Fraction(0)
        for (a, b), p in zip(self.piece_intervals(), self.pieces):
            prim = poly.antideriv(p)
            prim = poly.add(prim, (offset - poly.evaluate(prim, a),))
            pieces.append(prim)
            offset = poly.evaluate(prim, b)
        return PiecewisePoly(self.breakpoints, tuple(pieces), below=0, above=offset)

    def integral(self):
        return sum(
            (poly.evaluate(poly.antideriv(p), b) - poly.evaluate(poly.antideriv(p), a)
             for (a, b), p in zip(self.piece_intervals(), self.pieces)),
            Fraction(0),
        )

    def jumps(self):
        """Exact jump ``f(t_i+) - f(t_i-)`` at each interior breakpoint."""
        return [
            poly.evaluate(right, t) - poly.evaluate(left, t)
            for t, left, right in zip(self.breakpoints[1:-1], self.pieces, self.pieces[1:])
        ]
