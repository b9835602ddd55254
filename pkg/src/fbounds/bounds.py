"""Sharp bounds by linear programming over the 64 principal-strata masses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .model import (
    INTERACTIVE_TYPES,
    N_TYPES,
    OUTCOME,
    AssumptionSet,
    FactorialDist,
    ModelError,
    ObservationalDist,
)
from .simplex import INFEASIBLE, OPTIMAL, LinearProgram, solve

N_VARS = 4 * N_TYPES
SLACK_RESOLUTION = 1e-6

FEASIBLE = "feasible"
LP = "lp"
CLOSED_FORM = "closed_form"


class NoDataError(ValueError):
    """Neither an observational nor a factorial distribution was supplied."""


@dataclass(frozen=True, eq=False)
class Estimand:
    """A linear functional of the strata masses.

    Builtin kinds are ``ey_a1``, ``ey_a0`` and ``ate``; ``custom`` carries an
    explicit ``(2, 2, 16)`` coefficient array.
    """

    kind: str
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == "custom":
            w = np.array(self.weights, dtype=float)
            if w.shape != (2, 2, N_TYPES) or not np.all(np.isfinite(w)):
                raise ValueError("custom estimand needs finite coefficients of shape (2, 2, 16)")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)
        elif self.kind not in ("ey_a1", "ey_a0", "ate"):
            raise ValueError(f"unknown estimand kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Estimand":
        key = text.strip().lower().replace("-", "_")
        return cls(key)

    def coefficients(self) -> np.ndarray:
        """Coefficient of ``q[a, b, t]`` in the estimand, shape ``(2, 2, 16)``."""
        if self.kind == "custom":
            return self.weights
        w = np.zeros((2, 2, N_TYPES))
        for b in (0, 1):
            y1 = OUTCOME[:, 1, b]
            y0 = OUTCOME[:, 0, b]
            col = {"ey_a1": y1, "ey_a0": y0, "ate": y1 - y0}[self.kind]
            w[:, b, :] = col
        return w

    @property
    def natural_range(self):
        return (-1.0, 1.0) if self.kind == "ate" else (0.0, 1.0)


EY_A1 = Estimand("ey_a1")
EY_A0 = Estimand("ey_a0")
ATE = Estimand("ate")


@dataclass(frozen=True)
class BoundsResult:
    lower: Optional[float]
    upper: Optional[float]
    status: str
    slack_used: float = 0.0
    method: str = LP

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    @property
    def width(self) -> Optional[float]:
        if not self.feasible:
            return None
        return self.upper - self.lower

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return self.feasible and self.lower - tol <= value <= self.upper + tol

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status,
            "slack_used": self.slack_used,
            "method": self.method,
        }


def _observational_rows():
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            for y in (0, 1):
                row = np.zeros((2, 2, N_TYPES))
                row[a, b, :] = OUTCOME[:, a, b] == y
                rows.append(((a, b, y), row.reshape(-1)))
    return rows


def _factorial_rows():
    rows = []
    for a in (0, 1):
        for b in (0, 1):
            for y in (0, 1):
                row = np.zeros((2, 2, N_TYPES))
                row[:, :, :] = OUTCOME[:, a, b] == y
                rows.append(((a, b, y), row.reshape(-1)))
    return rows


OBS_ROWS = _observational_rows()
FACT_ROWS = _factorial_rows()
INTERACTION_ROW = np.zeros((2, 2, N_TYPES))
INTERACTION_ROW[:, :, list(INTERACTIVE_TYPES)] = 1.0
INTERACTION_ROW = INTERACTION_ROW.reshape(-1)


def _data_rows(obs: Optional[ObservationalDist], fact: Optional[FactorialDist]):
    if obs is None and fact is None:
        raise NoDataError("at least one of the observational or factorial distributions is required")
    rows = []
    if obs is not None:
        rows += [(row, obs.p[key]) for key, row in OBS_ROWS]
    if fact is not None:
        rows += [(row, fact.r[key]) for key, row in FACT_ROWS]
    return rows


def build_lp(
    obs: Optional[ObservationalDist],
    fact: Optional[FactorialDist],
    assumptions: Optional[AssumptionSet] = None,
    estimand: Estimand = ATE,
    slack: float = 0.0,
) -> LinearProgram:
    """Constraint system whose feasible set is every model consistent with the data.

    With ``slack == 0`` each data cell is an equality; otherwise it becomes the
    band ``|row . q - value| <= slack``. Forbidden strata are fixed to zero
    through their upper bounds.
    """
    assumptions = assumptions or AssumptionSet()
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    data = _data_rows(obs, fact)
    eq = [(np.ones(N_VARS), 1.0)]
    ineq = []
    if slack == 0:
        eq += data
    else:
        for row, value in data:
            ineq.append((row, value + slack))
            ineq.append((-row, -(value - slack)))
    if assumptions.max_interaction is not None:
        ineq.append((INTERACTION_ROW, assumptions.max_interaction))
    upper = np.where(assumptions.forbidden_mask().reshape(-1), 0.0, np.inf)
    return LinearProgram.from_rows(
        estimand.coefficients().reshape(-1), eq, ineq, var_lower=np.zeros(N_VARS), var_upper=upper
    )


def min_slack(
    obs: Optional[ObservationalDist],
    fact: Optional[FactorialDist],
    assumptions: Optional[AssumptionSet] = None,
) -> float:
    """Smallest uniform band on the data cells that admits a model (exact, by LP)."""
    assumptions = assumptions or AssumptionSet()
    data = _data_rows(obs, fact)
    n = N_VARS + 1
    eq = [(np.append(np.ones(N_VARS), 0.0), 1.0)]
    ineq = []
    for row, value in data:
        ineq.append((np.append(row, -1.0), value))
        ineq.append((np.append(-row, -1.0), -value))
    if assumptions.max_interaction is not None:
        ineq.append((np.append(INTERACTION_ROW, 0.0), assumptions.max_interaction))
    upper = np.append(np.where(assumptions.forbidden_mask().reshape(-1), 0.0, np.inf), np.inf)
    objective = np.zeros(n)
    objective[-1] = 1.0
    lp = LinearProgram.from_rows(objective, eq, ineq, var_lower=np.zeros(n), var_upper=upper)
    sol = solve(lp, "min")
    if not sol.optimal:
        raise ModelError(f"slack search failed with status {sol.status}")
    return max(0.0, sol.value)


def _resolve_slack(obs, fact, assumptions, slack) -> Optional[float]:
    """Numeric slack to use, or None when a forced slack leaves the program infeasible."""
    if slack == "auto":
        eps = min_slack(obs, fact, assumptions)
        if eps <= 1e-9:
            return 0.0
        return math.ceil((eps + 1e-9) / SLACK_RESOLUTION) * SLACK_RESOLUTION
    return float(slack)


def lp_bounds(
    obs: Optional[ObservationalDist],
    fact: Optional[FactorialDist],
    assumptions: Optional[AssumptionSet] = None,
    estimand: Estimand = ATE,
    slack: Union[float, str] = 0.0,
) -> BoundsResult:
    """Sharp lower and upper bounds on ``estimand``.

    ``slack="auto"`` keeps equality constraints when the data are jointly
    feasible and otherwise relaxes them by the smallest feasible band, rounded
    up to a 1e-6 grid.
    """
    assumptions = assumptions or AssumptionSet()
    eps = _resolve_slack(obs, fact, assumptions, slack)
    lp = build_lp(obs, fact, assumptions, estimand, eps)
    lo = solve(lp, "min")
    if lo.status == INFEASIBLE:
        return BoundsResult(None, None, INFEASIBLE, eps, LP)
    hi = solve(lp, "max")
    if lo.status != OPTIMAL or hi.status != OPTIMAL:
        # objective is bounded on the simplex, so this signals a solver fault
        raise RuntimeError(f"unexpected LP status {lo.status}/{hi.status}")
    return BoundsResult(lo.value, hi.value, FEASIBLE, eps, LP)


def is_feasible(obs, fact, assumptions: Optional[AssumptionSet] = None) -> bool:
    lp = build_lp(obs, fact, assumptions, Estimand("custom", np.zeros((2, 2, N_TYPES))))
    return solve(lp, "min").optimal


def _collapse(dist: np.ndarray, level: int) -> np.ndarray:
    hit = dist[:, :, level]
    return np.stack([dist.sum(axis=2) - hit, hit], axis=-1)


def multi_level_bounds(
    fact_k: Optional[np.ndarray],
    obs_k: Optional[np.ndarray],
    assumptions: Optional[AssumptionSet] = None,
    level: int = 1,
    estimand: Estimand = EY_A1,
    slack: Union[float, str] = 0.0,
) -> BoundsResult:
    """Bounds on ``Pr(Y_a = level)`` (or its contrast) for a k-level outcome.

    ``fact_k[a, b, y]`` and ``obs_k[a, b, y]`` hold the k-level distributions;
    ``Y`` is recoded to the indicator of ``level`` and the binary program is
    solved.
    """
    arrays = [np.asarray(x, dtype=float) for x in (fact_k, obs_k) if x is not None]
    if not arrays:
        raise NoDataError("at least one of the observational or factorial distributions is required")
    k = arrays[0].shape[-1]
    if any(x.shape != (2, 2, k) for x in arrays) or k < 2:
        raise ValueError("k-level distributions must have shape (2, 2, k) with k >= 2")
    if not 0 <= level < k:
        raise ValueError(f"level must be in [0, {k - 1}], got {level}")
    fact = FactorialDist(_collapse(np.asarray(fact_k, dtype=float), level)) if fact_k is not None else None
    obs = ObservationalDist(_collapse(np.asarray(obs_k, dtype=float), level)) if obs_k is not None else None
    return lp_bounds(obs, fact, assumptions, estimand, slack)
