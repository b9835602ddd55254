"""Empirical distributions from unit records and percentile bootstrap for bound endpoints."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .bounds import ATE, BoundsResult, Estimand, lp_bounds
from .dataset import EXP, OBS, Dataset
from .model import AssumptionSet, FactorialDist, ObservationalDist

RESAMPLING_SCHEME = "observational rows resampled jointly; factorial rows resampled within each arm"


class EmptyArmError(ValueError):
    """A factorial arm has no rows while other arms do."""


@dataclass(frozen=True)
class Empirical:
    obs: Optional[ObservationalDist]
    fact: Optional[FactorialDist]
    obs_counts: np.ndarray  # [a, b, y]
    fact_counts: np.ndarray  # [a, b, y]

    def counts_dict(self) -> dict:
        cells = [(a, b, y) for a in (0, 1) for b in (0, 1) for y in (0, 1)]
        return {
            "observational": {f"{a},{b},{y}": int(self.obs_counts[a, b, y]) for a, b, y in cells},
            "factorial": {f"{a},{b},{y}": int(self.fact_counts[a, b, y]) for a, b, y in cells},
        }


def _tally(data: Dataset, regime: int) -> np.ndarray:
    sel = data.regime == regime
    counts = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(counts, (data.a[sel], data.b[sel], data.y[sel]), 1)
    return counts


def empirical_distributions(data: Dataset) -> Empirical:
    """Cell frequencies for observational rows and per-arm frequencies for experimental rows."""
    if len(data) == 0:
        raise ValueError("dataset is empty")
    oc, fc = _tally(data, OBS), _tally(data, EXP)
    obs = ObservationalDist(oc / oc.sum()) if oc.sum() else None
    fact = None
    if fc.sum():
        arm = fc.sum(axis=2)
        if np.any(arm == 0):
            empty = [f"(a={a}, b={b})" for a in (0, 1) for b in (0, 1) if arm[a, b] == 0]
            raise EmptyArmError(f"factorial arm(s) {', '.join(empty)} have no rows; positivity requires every arm")
        fact = FactorialDist(fc / arm[:, :, None])
    return Empirical(obs, fact, oc, fc)


def resample(data: Dataset, rng: np.random.Generator) -> Dataset:
    """Observational rows with replacement; experimental rows with replacement inside each arm."""
    parts = []
    obs_idx = np.flatnonzero(data.regime == OBS)
    if obs_idx.size:
        parts.append(rng.choice(obs_idx, size=obs_idx.size, replace=True))
    exp = data.regime == EXP
    for a in (0, 1):
        for b in (0, 1):
            idx = np.flatnonzero(exp & (data.a == a) & (data.b == b))
            if idx.size:
                parts.append(rng.choice(idx, size=idx.size, replace=True))
    return data.subset(np.concatenate(parts) if parts else np.zeros(0, dtype=int))


def percentile_ranks(replicates: int, alpha: float) -> Tuple[int, int]:
    """1-based order-statistic ranks for the two-sided percentile interval."""
    lo = math.floor(alpha / 2 * replicates)
    hi = math.ceil((1 - alpha / 2) * replicates)
    return min(max(lo, 1), replicates), min(max(hi, 1), replicates)


@dataclass(frozen=True)
class BootstrapResult:
    point: BoundsResult
    ci_lower: Tuple[float, float]
    ci_upper: Tuple[float, float]
    replicates: int
    alpha: float
    slack: Tuple[float, ...]
    failed: int = 0

    def to_dict(self) -> dict:
        eps = np.asarray(self.slack)
        return {
            "point": self.point.to_dict(),
            "ci_lower": list(self.ci_lower),
            "ci_upper": list(self.ci_upper),
            "replicates": self.replicates,
            "alpha": self.alpha,
            "failed_replicates": self.failed,
            "slack": {
                "nonzero": int(np.sum(eps > 0)),
                "max": float(eps.max()) if eps.size else 0.0,
                "mean": float(eps.mean()) if eps.size else 0.0,
            },
            "resampling": RESAMPLING_SCHEME,
            "method": "percentile",
        }


def bootstrap_bounds(
    data: Dataset,
    estimand: Estimand = ATE,
    assumptions: Optional[AssumptionSet] = None,
    replicates: int = 200,
    alpha: float = 0.05,
    seed: int = 0,
) -> BootstrapResult:
    """Percentile intervals for the lower and upper bound endpoints.

    Replicate ``k`` draws from ``default_rng([seed, k])`` so results do not
    depend on evaluation order. Each replicate uses ``slack="auto"``.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    assumptions = assumptions or AssumptionSet()
    emp = empirical_distributions(data)
    point = lp_bounds(emp.obs, emp.fact, assumptions, estimand, "auto")
    lows, highs, eps = [], [], []
    failed = 0
    for k in range(replicates):
        rep = empirical_distributions(resample(data, np.random.default_rng([seed, k])))
        res = lp_bounds(rep.obs, rep.fact, assumptions, estimand, "auto")
        eps.append(res.slack_used)
        if not res.feasible:
            failed += 1
            continue
        lows.append(res.lower)
        highs.append(res.upper)
    if not lows:
        raise ValueError("no bootstrap replicate produced a feasible interval")
    lows, highs = np.sort(lows), np.sort(highs)
    lo_rank, hi_rank = percentile_ranks(len(lows), alpha)
    return BootstrapResult(
        point=point,
        ci_lower=(float(lows[lo_rank - 1]), float(lows[hi_rank - 1])),
        ci_upper=(float(highs[lo_rank - 1]), float(highs[hi_rank - 1])),
        replicates=replicates,
        alpha=alpha,
        slack=tuple(eps),
        failed=failed,
    )
