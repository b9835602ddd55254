"""Dense two-phase simplex with Bland's rule.

Solves ``min/max c.x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub`` and
``lower <= x <= upper``. Intended for problems with a few hundred columns at
most; every pivot is a dense rank-one update of the full tableau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PIVOT_TOL = 1e-10
FEASIBILITY_TOL = 1e-8
MAX_PIVOTS = 100_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPDimensionError(ValueError):
    """A constraint row or bound vector does not match the number of variables."""


def _matrix(rows, n: int, name: str) -> np.ndarray:
    if rows is None:
        return np.zeros((0, n))
    m = np.array(rows, dtype=float)
    if m.size == 0:
        return np.zeros((0, n))
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2 or m.shape[1] != n:
        raise LPDimensionError(f"{name} rows must have length {n}, got shape {m.shape}")
    return m


def _vector(v, n: int, name: str, fill: float) -> np.ndarray:
    if v is None:
        return np.full(n, fill)
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (n,):
        raise LPDimensionError(f"{name} must have length {n}, got {arr.shape[0]}")
    return arr


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """An LP in bounded-variable form. Rows of ``ineq_matrix`` mean ``row . x <= rhs``."""

    objective: np.ndarray
    eq_matrix: Optional[np.ndarray] = None
    eq_rhs: Optional[np.ndarray] = None
    ineq_matrix: Optional[np.ndarray] = None
    ineq_rhs: Optional[np.ndarray] = None
    var_lower: Optional[np.ndarray] = None
    var_upper: Optional[np.ndarray] = None

    def __post_init__(self):
        c = np.array(self.objective, dtype=float).reshape(-1)
        n = c.shape[0]
        a_eq = _matrix(self.eq_matrix, n, "equality")
        a_ub = _matrix(self.ineq_matrix, n, "inequality")
        b_eq = _vector(self.eq_rhs, a_eq.shape[0], "eq_rhs", 0.0)
        b_ub = _vector(self.ineq_rhs, a_ub.shape[0], "ineq_rhs", 0.0)
        lo = _vector(self.var_lower, n, "var_lower", 0.0)
        up = _vector(self.var_upper, n, "var_upper", np.inf)
        if np.any(lo > up):
            raise LPDimensionError("var_lower must not exceed var_upper")
        if np.any(np.isnan(lo)) or np.any(np.isnan(up)) or np.any(lo == np.inf) or np.any(up == -np.inf):
            raise LPDimensionError("variable bounds must be ordered and not NaN")
        for name, arr in (("objective", c), ("eq", a_eq), ("eq_rhs", b_eq), ("ineq", a_ub), ("ineq_rhs", b_ub)):
            if not np.all(np.isfinite(arr)):
                raise LPDimensionError(f"{name} entries must be finite")
            arr.setflags(write=False)
        for name, arr in (("objective", c), ("eq_matrix", a_eq), ("eq_rhs", b_eq), ("ineq_matrix", a_ub),
                          ("ineq_rhs", b_ub), ("var_lower", lo), ("var_upper", up)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_rows(
        cls,
        objective: Sequence[float],
        eq_rows: Sequence = (),
        ineq_rows: Sequence = (),
        var_lower=None,
        var_upper=None,
    ) -> "LinearProgram":
        """Build from ``(coefficients, rhs)`` pairs."""
        n = len(objective)
        eq = [r for r, _ in eq_rows]
        ub = [r for r, _ in ineq_rows]
        return cls(
            objective,
            eq if eq else np.zeros((0, n)),
            [v for _, v in eq_rows],
            ub if ub else np.zeros((0, n)),
            [v for _, v in ineq_rows],
            var_lower,
            var_upper,
        )

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    def with_objective(self, objective) -> "LinearProgram":
        return LinearProgram(objective, self.eq_matrix, self.eq_rhs, self.ineq_matrix, self.ineq_rhs,
                             self.var_lower, self.var_upper)

    def residual(self, x) -> float:
        """Largest violation of any constraint or bound at ``x`` (L-infinity)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.eq_matrix.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.eq_matrix @ x - self.eq_rhs))))
        if self.ineq_matrix.shape[0]:
            worst = max(worst, float(np.max(self.ineq_matrix @ x - self.ineq_rhs, initial=0.0)))
        worst = max(worst, float(np.max(self.var_lower - x, initial=0.0)))
        worst = max(worst, float(np.max(x - self.var_upper, initial=0.0)))
        return worst


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str
    value: Optional[float] = None
    point: Optional[np.ndarray] = None
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Rows ``0..m-1`` are constraints, row ``m`` is the reduced-cost row; last column is the rhs."""

    def __init__(self, a: np.ndarray, b: np.ndarray, basis: np.ndarray):
        m, n = a.shape
        self.t = np.zeros((m + 1, n + 1))
        self.t[:m, :n] = a
        self.t[:m, n] = b
        self.basis = basis.copy()
        self.pivots = 0

    @property
    def m(self) -> int:
        return self.t.shape[0] - 1

    def set_costs(self, c: np.ndarray) -> None:
        m = self.m
        row = np.zeros(self.t.shape[1])
        row[: c.shape[0]] = c
        cb = row[self.basis]
        row -= cb @ self.t[:m]
        self.t[m] = row

    def pivot(self, r: int, j: int) -> None:
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[:, j] = 0.0
        t[r, j] = 1.0
        self.basis[r] = j
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise RuntimeError("simplex exceeded the pivot limit")

    def iterate(self, allowed: np.ndarray) -> str:
        """Pivot to optimality over the ``allowed`` columns using Bland's rule."""
        t = self.t
        m = self.m
        while True:
            costs = t[m, :-1]
            candidates = np.flatnonzero((costs < -PIVOT_TOL) & allowed)
            if candidates.size == 0:
                return OPTIMAL
            j = int(candidates[0])
            col = t[:m, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = t[rows, -1] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            r = int(ties[np.argmin(self.basis[ties])])
            self.pivot(r, j)


@dataclass
class _Standardized:
    """``x = offset + T z`` with ``z >= 0`` and ``A z = b``, ``b >= 0``."""

    offset: np.ndarray
    transform: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    n_structural: int
    slack_basis: np.ndarray  # per row: a slack column usable as initial basis, or -1


def _standardize(lp: LinearProgram, c: np.ndarray) -> _Standardized:
    n = lp.n_vars
    lo, up = lp.var_lower, lp.var_upper
    offset = np.zeros(n)
    cols = []
    bound_rows = []  # (z column, width) for finite boxes
    for i in range(n):
        if np.isfinite(lo[i]) and lo[i] == up[i]:
            offset[i] = lo[i]
        elif np.isfinite(lo[i]):
            offset[i] = lo[i]
            e = np.zeros(n)
            e[i] = 1.0
            cols.append(e)
            if np.isfinite(up[i]):
                bound_rows.append((len(cols) - 1, up[i] - lo[i]))
        elif np.isfinite(up[i]):
            offset[i] = up[i]
            e = np.zeros(n)
            e[i] = -1.0
            cols.append(e)
        else:
            e = np.zeros(n)
            e[i] = 1.0
            cols.append(e)
            cols.append(-e)
    transform = np.array(cols).T if cols else np.zeros((n, 0))
    nz = transform.shape[1]

    a_eq = lp.eq_matrix @ transform
    b_eq = lp.eq_rhs - lp.eq_matrix @ offset
    a_ub = lp.ineq_matrix @ transform
    b_ub = lp.ineq_rhs - lp.ineq_matrix @ offset
    if bound_rows:
        box = np.zeros((len(bound_rows), nz))
        for r, (j, _) in enumerate(bound_rows):
            box[r, j] = 1.0
        a_ub = np.vstack([a_ub, box])
        b_ub = np.concatenate([b_ub, [w for _, w in bound_rows]])

    m_eq, m_ub = a_eq.shape[0], a_ub.shape[0]
    a = np.zeros((m_eq + m_ub, nz + m_ub))
    a[:m_eq, :nz] = a_eq
    a[m_eq:, :nz] = a_ub
    a[m_eq:, nz:] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])
    slack_basis = np.full(m_eq + m_ub, -1)
    slack_basis[m_eq:] = nz + np.arange(m_ub)
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0
    slack_basis[neg] = -1

    cz = np.zeros(nz + m_ub)
    cz[:nz] = c @ transform
    return _Standardized(offset, transform, a, b, cz, nz, slack_basis)


def solve(lp: LinearProgram, direction: str = "min") -> LpSolution:
    """Optimize ``lp.objective`` in the given direction (``"min"`` or ``"max"``)."""
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    sign = 1.0 if direction == "min" else -1.0
    std = _standardize(lp, sign * lp.objective)
    m, n = std.a.shape

    need_art = np.flatnonzero(std.slack_basis < 0)
    n_art = need_art.size
    a = np.hstack([std.a, np.zeros((m, n_art))])
    basis = std.slack_basis.copy()
    for k, r in enumerate(need_art):
        a[r, n + k] = 1.0
        basis[r] = n + k
    tab = _Tableau(a, std.b, basis)

    if n_art:
        phase1 = np.zeros(n + n_art)
        phase1[n:] = 1.0
        tab.set_costs(phase1)
        tab.iterate(np.ones(n + n_art, dtype=bool))
        if -tab.t[m, -1] > FEASIBILITY_TOL:
            return LpSolution(INFEASIBLE, pivots=tab.pivots)
        _drive_out_artificials(tab, n)

    tab.t = np.delete(tab.t, np.s_[n : n + n_art], axis=1)
    tab.set_costs(std.c)
    status = tab.iterate(np.ones(n, dtype=bool))
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=tab.pivots)

    z = np.zeros(n)
    z[tab.basis] = tab.t[: tab.m, -1]
    z = np.maximum(z, 0.0)
    x = std.offset + std.transform @ z[: std.n_structural]
    return LpSolution(OPTIMAL, float(lp.objective @ x), x, tab.pivots)


def _drive_out_artificials(tab: _Tableau, n: int) -> None:
    """Pivot zero-level artificials out of the basis; drop rows where that is impossible."""
    keep = []
    for r in range(tab.m):
        if tab.basis[r] < n:
            keep.append(r)
            continue
        row = tab.t[r, :n]
        nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
        if nz.size:
            tab.pivot(r, int(nz[0]))
            keep.append(r)
    if len(keep) < tab.m:
        tab.t = np.vstack([tab.t[keep], tab.t[-1:]])
        tab.basis = tab.basis[keep]
