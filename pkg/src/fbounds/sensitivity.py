"""Bounds as a function of the maximum allowed interactive-strata mass."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .bounds import ATE, BoundsResult, Estimand, lp_bounds
from .model import AssumptionSet, FactorialDist, ObservationalDist

CSV_COLUMNS = ("theta", "lower", "upper", "status")


def default_grid() -> Tuple[float, ...]:
    return tuple(round(0.05 * k, 10) for k in range(21))


def parse_grid(text: str) -> Tuple[float, ...]:
    """``start:stop:step`` (inclusive stop) or a comma separated list."""
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise ValueError(f"grid must look like start:stop:step, got {text!r}") from None
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(max(n, 0)))
    return tuple(float(x) for x in text.split(",") if x.strip())


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    result: BoundsResult


@dataclass(frozen=True)
class SweepCurve:
    points: Tuple[SweepPoint, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def at(self, theta: float) -> BoundsResult:
        for p in self.points:
            if abs(p.theta - theta) < 1e-12:
                return p.result
        raise KeyError(theta)

    def rows(self):
        for p in self.points:
            r = p.result
            yield p.theta, r.lower, r.upper, r.status

    def write_csv(self, target: Union[str, Path, io.TextIOBase]) -> None:
        if isinstance(target, (str, Path)):
            with open(target, "w", newline="") as fh:
                self.write_csv(fh)
            return
        w = csv.writer(target, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for theta, lo, hi, status in self.rows():
            w.writerow([f"{theta:.10g}", "" if lo is None else repr(lo), "" if hi is None else repr(hi), status])


def theta_sweep(
    obs: Optional[ObservationalDist],
    fact: Optional[FactorialDist],
    estimand: Estimand = ATE,
    base: Optional[AssumptionSet] = None,
    grid: Optional[Iterable[float]] = None,
    slack: Union[float, str] = 0.0,
) -> SweepCurve:
    """``lp_bounds`` at each cap ``theta`` on the total interactive mass."""
    base = base or AssumptionSet()
    if base.no_interaction:
        raise ValueError("base assumptions must not already exclude interaction")
    thetas: Sequence[float] = default_grid() if grid is None else tuple(grid)
    if not thetas:
        raise ValueError("grid is empty")
    if any(not 0.0 <= t <= 1.0 for t in thetas):
        raise ValueError("grid values must lie in [0, 1]")
    if any(b <= a for a, b in zip(thetas, thetas[1:])):
        raise ValueError("grid must be strictly increasing")
    points = tuple(SweepPoint(t, lp_bounds(obs, fact, base.with_theta(t), estimand, slack)) for t in thetas)
    return SweepCurve(points)
