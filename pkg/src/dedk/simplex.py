"""Dense tableau simplex for covering LPs ``min c.x  s.t.  A x >= 1, x >= 0``.

The solver works on the packing dual ``max 1.y  s.t.  A^T y <= c, y >= 0``.
With c >= 0 the all-slack basis is feasible, so no phase one is needed, and a
new covering row is just a new dual column: the current basis stays feasible and
the solve resumes from it.  That is what makes row generation cheap.

Covering primal values are read off the reduced costs of the slack columns.
"""

import numpy as np

from .errors import NumericalFailure

PIVOT_TOL = 1e-11
DEGENERATE_LIMIT = 500


class CoveringSimplex:
    """Restricted master LP that accepts rows one at a time.

    Tableau columns are the m slacks (one per variable of the covering LP)
    followed by one column per covering row, in insertion order; that order is
    also the index order Bland's rule uses.
    """

    def __init__(self, costs, tol=1e-9):
        c = np.asarray(costs, dtype=float)
        if np.any(c < 0):
            raise ValueError("covering costs must be nonnegative")
        self.m = len(c)
        self.tol = tol
        self.costs = c
        self.body = np.eye(self.m)  # B^-1 [I | A^T]
        self.rhs = c.copy()  # basic variable values
        self.reduced = np.zeros(self.m)  # z_j - c_j for the max problem
        self.basis = list(range(self.m))
        self.rows = []
        self.pivots = 0
        self.bland = False

    @property
    def binv(self):
        return self.body[:, : self.m]

    def add_row(self, row):
        """Append a covering row (a 0/1 vector over the m variables)."""
        self.add_rows([row])

    def add_rows(self, rows):
        rows = np.asarray(rows, dtype=float)
        if rows.size == 0:
            return
        rows = rows.reshape(-1, self.m)
        cols = self.binv @ rows.T
        red = rows @ self.primal_raw() - 1.0
        self.body = np.hstack([self.body, cols])
        self.reduced = np.concatenate([self.reduced, red])
        self.rows.extend(rows)

    def primal_raw(self):
        return self.reduced[: self.m].copy()

    def primal(self):
        return np.clip(self.primal_raw(), 0.0, None)

    def dual(self):
        """Weights y on the covering rows (the packing solution)."""
        y = np.zeros(len(self.rows))
        for i, j in enumerate(self.basis):
            if j >= self.m:
                y[j - self.m] = self.rhs[i]
        return np.clip(y, 0.0, None)

    def objective(self):
        return float(self.dual().sum())

    def _entering(self):
        red = self.reduced
        if red.size == 0:
            return None
        if self.bland:
            cands = np.flatnonzero(red < -self.tol)
            return int(cands[0]) if cands.size else None
        j = int(np.argmin(red))
        return j if red[j] < -self.tol else None

    def _leaving(self, j):
        col = self.body[:, j]
        ok = col > PIVOT_TOL
        if not ok.any():
            raise NumericalFailure(
                f"no pivot above {PIVOT_TOL:g} in entering column {j} while constraints are violated"
            )
        ratios = np.full(self.m, np.inf)
        ratios[ok] = np.maximum(self.rhs[ok], 0.0) / col[ok]
        best = ratios.min()
        tied = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, best))
        # ties: smallest basic variable index (Bland)
        i = int(min(tied, key=lambda r: self.basis[r]))
        return i, best

    def solve(self, max_pivots=100_000):
        degenerate = 0
        for _ in range(max_pivots):
            j = self._entering()
            if j is None:
                return self
            i, step = self._leaving(j)
            degenerate = degenerate + 1 if step <= 1e-12 else 0
            if degenerate >= DEGENERATE_LIMIT:
                self.bland = True
            self._pivot(i, j)
        raise NumericalFailure(f"simplex did not terminate within {max_pivots} pivots")

    def _pivot(self, i, j):
        piv = self.body[i, j]
        self.body[i] /= piv
        self.rhs[i] /= piv
        col = self.body[:, j].copy()
        col[i] = 0.0
        self.body -= np.outer(col, self.body[i])
        self.rhs -= col * self.rhs[i]
        self.reduced = self.reduced - self.reduced[j] * self.body[i]
        self.reduced[j] = 0.0
        self.body[:, j] = 0.0
        self.body[i, j] = 1.0
        self.basis[i] = j
        self.pivots += 1

    def slackness_residual(self):
        """Largest complementary-slackness violation of the current pair."""
        x, y = self.primal(), self.dual()
        if not self.rows:
            return float(np.abs(x * self.costs).max(initial=0.0))
        A = np.array(self.rows)
        primal_side = np.abs(x * (self.costs - A.T @ y)).max(initial=0.0)
        dual_side = np.abs(y * (A @ x - 1.0)).max(initial=0.0)
        return float(max(primal_side, dual_side))


def restricted_simplex(costs, constraint_rows, tol=1e-9):
    """Solve ``min c.x  s.t.  A x >= 1, x >= 0`` for a 0/1 row matrix A.

    Returns ``(x, y)``: the optimal covering solution and the optimal weights on
    the rows.  Dantzig pricing, switching for good to Bland's rule after 500
    consecutive degenerate pivots.
    """
    lp = CoveringSimplex(costs, tol)
    lp.add_rows(constraint_rows)
    lp.solve()
    resid = lp.slackness_residual()
    if resid > max(tol, 1e-9) * 1e3:
        raise NumericalFailure(f"complementary slackness residual {resid:g}")
    return lp.primal(), lp.dual()
