"""Named checks on the builtin scenarios, each recorded as pass/fail with its numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from .bounds import ATE, EY_A1, is_feasible, lp_bounds
from .identify import amce_population, amce_uniform
from .model import AssumptionSet, interaction_mass
from .scenarios import SCENARIO_NAMES, builtin_scenario
from .sensitivity import theta_sweep

WIDTH_TOL = 1e-6

ASSUMPTION_GRID: Dict[str, AssumptionSet] = {
    "none": AssumptionSet(),
    "mono": AssumptionSet.monotone(),
    "no-interaction": AssumptionSet(no_interaction=True),
    "mono+no-interaction": AssumptionSet(monotone_a=True, monotone_b=True, no_interaction=True),
}


@dataclass
class Check:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "values": self.values}


def _example1() -> List[Check]:
    s = builtin_scenario("example1")
    m = s.fact.means()
    contrasts = (float(m[1, 0] - m[0, 0]), float(m[1, 1] - m[0, 1]))
    uni = amce_uniform(s.fact)["ate"]
    pop = amce_population(s.fact, s.obs.b_marginal())["ate"]
    return [
        Check("true ATE is 0.24", abs(s.truth.ate - 0.24) <= 1e-12, {"ate": s.truth.ate}),
        Check(
            "arm contrasts are -0.5504 and 0.0424",
            abs(contrasts[0] + 0.5504) <= 1e-12 and abs(contrasts[1] - 0.0424) <= 1e-12,
            {"b0": contrasts[0], "b1": contrasts[1]},
        ),
        Check("uniform AMCE is -0.254", abs(uni + 0.254) <= 1e-12, {"amce_uniform": uni}),
        Check("population AMCE is -0.07616", abs(pop + 0.07616) <= 1e-12, {"amce_population": pop}),
        Check("both AMCEs have the wrong sign", uni < 0 < s.truth.ate and pop < 0, {"truth": s.truth.ate}),
        Check(
            "LP interval contains the truth",
            lp_bounds(s.obs, s.fact, None, ATE).contains(s.truth.ate),
            lp_bounds(s.obs, s.fact, None, ATE).to_dict(),
        ),
    ]


def _example2() -> List[Check]:
    s = builtin_scenario("example2")
    lp = lp_bounds(s.obs, s.fact, None, ATE)
    curve = theta_sweep(s.obs, s.fact, ATE, grid=(0.0, 1.0))
    zero = curve.at(0.0)
    return [
        Check("true ATE is 0.58", abs(s.truth.ate - 0.58) <= 1e-9, {"ate": s.truth.ate}),
        Check("no interactive mass", interaction_mass(s.model) <= 1e-12, {"interaction_mass": interaction_mass(s.model)}),
        Check("monotone LP feasible", is_feasible(s.obs, s.fact, AssumptionSet.monotone())),
        Check("LP interval contains 0.58", lp.contains(0.58), lp.to_dict()),
        Check(
            "theta=0 point-identifies 0.58",
            zero.feasible and zero.width <= WIDTH_TOL and abs(zero.lower - 0.58) <= WIDTH_TOL,
            zero.to_dict(),
        ),
        Check(
            "theta=1 equals the unrestricted interval",
            abs(curve.at(1.0).lower - lp.lower) <= 1e-7 and abs(curve.at(1.0).upper - lp.upper) <= 1e-7,
            curve.at(1.0).to_dict(),
        ),
    ]


def _counterexample_mono() -> List[Check]:
    s = builtin_scenario("counterexample-mono")
    mono = AssumptionSet.monotone()
    ey = lp_bounds(s.obs, s.fact, mono, EY_A1)
    ate = lp_bounds(s.obs, s.fact, mono, ATE)
    return [
        Check("monotone LP feasible", ey.feasible, {"status": ey.status}),
        Check("EY_A1 not identified", ey.feasible and ey.width > WIDTH_TOL, ey.to_dict()),
        Check("EY_A1 upper endpoint is 1", ey.feasible and abs(ey.upper - 1.0) <= WIDTH_TOL, ey.to_dict()),
        Check("ATE not identified", ate.feasible and ate.width > WIDTH_TOL, ate.to_dict()),
    ]


def _counterexample_nointeract() -> List[Check]:
    s = builtin_scenario("counterexample-nointeract")
    checks = []
    for label, assume in ASSUMPTION_GRID.items():
        ey = lp_bounds(s.obs, s.fact, assume, EY_A1)
        ate = lp_bounds(s.obs, s.fact, assume, ATE)
        checks.append(Check(f"[{label}] feasibility diagnostic", True, {"feasible": ey.feasible}))
        if ey.feasible:
            checks.append(Check(f"[{label}] EY_A1 not identified", ey.width > WIDTH_TOL, ey.to_dict()))
        if label == "no-interaction" and ate.feasible:
            checks.append(
                Check(
                    "[no-interaction] ATE identified at 0.5",
                    ate.width <= WIDTH_TOL and abs(ate.lower - 0.5) <= WIDTH_TOL,
                    ate.to_dict(),
                )
            )
    return checks


_RUNNERS = {
    "example1": _example1,
    "example2": _example2,
    "counterexample-mono": _counterexample_mono,
    "counterexample-nointeract": _counterexample_nointeract,
}


def verify_scenario(name: str) -> List[Check]:
    if name not in _RUNNERS:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")
    return _RUNNERS[name]()


def verify_all() -> Dict[str, List[Check]]:
    return {name: verify_scenario(name) for name in SCENARIO_NAMES}
