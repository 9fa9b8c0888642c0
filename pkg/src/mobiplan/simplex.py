"""Dense primal simplex for covering LPs.

Solves  min c @ x  subject to  A @ x >= b,  x >= 0  with b >= 0 and c >= 0.
The solve runs on the packing dual  max b @ u  s.t.  A' u <= c,  u >= 0,
whose slack basis is immediately feasible (no artificial variables), and the
optimal primal x is recovered from the slack reduced costs, which is exact
by complementary slackness.

Pricing is Dantzig's rule with a lexicographic ratio tie-break; covering
tableaus are heavily degenerate and the lexicographic rule is the classical
cycle-proof refinement.  Bland's rule takes over after a long degenerate
stall as a belt-and-braces termination guarantee, and an iteration cap
bounds the total work.
"""

from __future__ import annotations

import numpy as np

from .errors import SolverError

_PIVOT_TOL = 1e-9
_STALL_LIMIT = 256  # consecutive degenerate pivots before Bland takes over
_REFRESH_EVERY = 128  # rebuild the incremental cost row this often


class _Tableau:
    """Tableau for min cost @ v s.t. body @ v + slacks = rhs, v >= 0."""

    def __init__(self, body: np.ndarray, rhs: np.ndarray, max_iter: int):
        m, n = body.shape
        self.m, self.n = m, n
        self.n_total = n + m
        self.rows = np.zeros((m, self.n_total + 1))
        self.rows[:, :n] = body
        self.rows[:, n : self.n_total] = np.eye(m)
        self.rows[:, -1] = rhs
        self.basis = np.arange(n, self.n_total)  # slack start
        self.in_basis = np.zeros(self.n_total, dtype=bool)
        self.in_basis[self.basis] = True
        self.pivots_left = int(max_iter)

    def pivot(self, row: int, col: int, z: np.ndarray | None) -> None:
        if self.pivots_left <= 0:
            raise SolverError("simplex iteration cap exceeded")
        self.pivots_left -= 1
        self.rows[row, :] /= self.rows[row, col]
        pivot_row = self.rows[row, :]
        factors = self.rows[:, col].copy()
        factors[row] = 0.0
        self.rows -= np.outer(factors, pivot_row)
        self.rows[:, col] = 0.0
        self.rows[row, col] = 1.0
        if z is not None and z[col] != 0.0:
            z -= z[col] * pivot_row[: self.n_total]
            z[col] = 0.0
        self.in_basis[self.basis[row]] = False
        self.in_basis[col] = True
        self.basis[row] = col

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        z = cost.astype(float).copy()
        weights = cost[self.basis]
        nz = weights != 0.0
        if np.any(nz):
            z -= weights[nz] @ self.rows[nz, : self.n_total]
        z[self.basis] = 0.0
        return z

    def _choose_entering(self, z: np.ndarray, bland: bool) -> int:
        eligible = ~self.in_basis & (z < -_PIVOT_TOL)
        idx = np.nonzero(eligible)[0]
        if idx.size == 0:
            return -1
        if bland:
            return int(idx[0])  # lowest eligible index
        return int(idx[np.argmin(z[idx])])  # most negative, first on ties

    def _choose_leaving(self, col: np.ndarray) -> int:
        positive = col > _PIVOT_TOL
        if not np.any(positive):
            return -1
        ratios = np.full(self.m, np.inf)
        ratios[positive] = self.rows[positive, -1] / col[positive]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + _PIVOT_TOL)[0]
        if ties.size == 1:
            return int(ties[0])
        # Lexicographic refinement over the slack block, whose columns carry
        # the basis inverse: rows stay lexicographically positive, so no
        # basis can repeat.
        for k in range(self.n, self.n_total):
            vals = self.rows[ties, k] / col[ties]
            keep = vals <= vals.min() + _PIVOT_TOL
            if keep.sum() < ties.size:
                ties = ties[keep]
                if ties.size == 1:
                    return int(ties[0])
        return int(ties[np.argmin(self.basis[ties])])

    def minimize(self, cost: np.ndarray) -> None:
        z = self.reduced_costs(cost)
        objective = float(cost[self.basis] @ self.rows[:, -1])
        stall = 0
        bland = False
        since_refresh = 0
        while True:
            if since_refresh >= _REFRESH_EVERY:
                z = self.reduced_costs(cost)
                since_refresh = 0
            entering = self._choose_entering(z, bland)
            if entering < 0:
                if since_refresh:
                    # Confirm optimality against a freshly built cost row.
                    z = self.reduced_costs(cost)
                    since_refresh = 0
                    if self._choose_entering(z, bland) >= 0:
                        continue
                return
            leaving = self._choose_leaving(self.rows[:, entering])
            if leaving < 0:
                z = self.reduced_costs(cost)
                since_refresh = 0
                if z[entering] < -_PIVOT_TOL:
                    raise SolverError("LP is unbounded")
                continue
            self.pivot(leaving, entering, z)
            since_refresh += 1
            new_objective = float(cost[self.basis] @ self.rows[:, -1])
            if not bland:
                if new_objective >= objective - _PIVOT_TOL:
                    stall += 1
                    if stall >= _STALL_LIMIT:
                        bland = True
                else:
                    stall = 0
            objective = new_objective


def simplex_minimize(
    c: np.ndarray, a: np.ndarray, b: np.ndarray, max_iter: int
) -> tuple[np.ndarray, float]:
    """Return (x, objective) for min c@x s.t. a@x >= b, x >= 0.

    Requires c >= 0 and b >= 0 (always true for covering relaxations).
    Raises SolverError when the pivot budget runs out or the constraints
    are infeasible.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.any(b < 0):
        raise ValueError("rhs must be non-negative")
    if np.any(c < 0):
        raise ValueError("costs must be non-negative")

    tab = _Tableau(body=a.T, rhs=c, max_iter=max_iter)
    dual_cost = np.zeros(tab.n_total)
    dual_cost[: tab.n] = -b  # maximize b @ u
    try:
        tab.minimize(dual_cost)
    except SolverError as exc:
        if "unbounded" in str(exc):
            # Unbounded packing dual means the covering primal is infeasible.
            raise SolverError("LP infeasible") from exc
        raise

    z = tab.reduced_costs(dual_cost)
    x = z[tab.n :].copy()  # primal optimum = slack reduced costs
    np.maximum(x, 0.0, out=x)
    return x, float(c @ x)
