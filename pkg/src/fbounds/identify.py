"""Point-identified AMCE estimators and an identification advisor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import FactorialDist, ObservationalDist

GRAPH_CASES = ("fully_confounded", "b_no_effect", "b_unconfounded", "all_unconfounded")
FUNCTIONALS = ("none", "monotone", "no_interaction", "linear_interactive", "linear_additive")
DATA_REGIMES = ("observational", "factorial", "both")
ESTIMANDS = ("EY_a", "ATE")

AMCE_POPULATION = "amce_population"
AMCE_UNIFORM = "amce_uniform"
OBSERVATIONAL_CONDITIONAL = "observational_conditional"


def amce_population(fact: FactorialDist, p_b) -> dict:
    """Arm means averaged over ``p_b``, the distribution of ``B``."""
    w = np.asarray(p_b, dtype=float)
    if w.shape != (2,) or not np.all(np.isfinite(w)) or w.min() < 0 or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"p_b must be a probability vector over {{0, 1}}, got {p_b!r}")
    m = fact.means()
    ey_a0, ey_a1 = float(m[0] @ w), float(m[1] @ w)
    return {"ey_a0": ey_a0, "ey_a1": ey_a1, "ate": ey_a1 - ey_a0}


def amce_uniform(fact: FactorialDist) -> dict:
    return amce_population(fact, (0.5, 0.5))


def observational_conditional(obs: ObservationalDist) -> dict:
    """``E[Y | A = a]``, identified when nothing confounds ``Y``."""
    ey = []
    for a in (0, 1):
        pa = obs.prob(a=a)
        if pa <= 0:
            raise ValueError(f"Pr(A={a}) is zero; conditional mean undefined")
        ey.append(obs.prob(a=a, y=1) / pa)
    return {"ey_a0": ey[0], "ey_a1": ey[1], "ate": ey[1] - ey[0]}


@dataclass(frozen=True)
class AssumptionProfile:
    graph_case: str = "fully_confounded"
    functional: str = "none"
    data: str = "both"

    def __post_init__(self):
        for value, allowed, name in (
            (self.graph_case, GRAPH_CASES, "graph_case"),
            (self.functional, FUNCTIONALS, "functional"),
            (self.data, DATA_REGIMES, "data"),
        ):
            if value not in allowed:
                raise ValueError(f"{name} must be one of {', '.join(allowed)}; got {value!r}")


@dataclass(frozen=True)
class Verdict:
    estimand: str
    identified: bool
    estimator: Optional[str]
    citation: str
    note: str = ""

    def __post_init__(self):
        if self.identified != (self.estimator is not None):
            raise ValueError("an identified verdict needs an estimator and vice versa")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


# Parametric results on the fully confounded graph: (functional, data, estimand) -> estimator.
_PARAMETRIC_COLUMN = {
    "none": "general",
    "monotone": "general",
    "no_interaction": "no_interaction",
    "linear_interactive": "linear_interactive",
    "linear_additive": "linear_additive",
}
_PARAMETRIC = {
    ("no_interaction", "factorial", "ATE"): AMCE_UNIFORM,
    ("no_interaction", "both", "ATE"): AMCE_UNIFORM,
    ("linear_interactive", "both", "EY_a"): AMCE_POPULATION,
    ("linear_interactive", "both", "ATE"): AMCE_POPULATION,
    ("linear_additive", "factorial", "EY_a"): AMCE_POPULATION,
    ("linear_additive", "factorial", "ATE"): AMCE_UNIFORM,
    ("linear_additive", "both", "EY_a"): AMCE_POPULATION,
    ("linear_additive", "both", "ATE"): AMCE_UNIFORM,
}

# Structural results for E[Y_a] with no functional restriction: (graph, data) -> (estimator, reason).
_STRUCTURAL = {
    ("fully_confounded", "observational"): (None, "confounded"),
    ("fully_confounded", "factorial"): (None, "confounded"),
    ("fully_confounded", "both"): (None, "confounded"),
    ("b_no_effect", "observational"): (None, "confounded"),
    ("b_no_effect", "factorial"): (AMCE_UNIFORM, "rule 3"),
    ("b_no_effect", "both"): (AMCE_UNIFORM, "rule 3"),
    ("b_unconfounded", "observational"): (None, "confounded"),
    ("b_unconfounded", "factorial"): (None, "confounded"),
    ("b_unconfounded", "both"): (AMCE_POPULATION, "rule 2"),
    ("all_unconfounded", "observational"): (OBSERVATIONAL_CONDITIONAL, "rule 1"),
    ("all_unconfounded", "factorial"): (AMCE_UNIFORM, "rule 3"),
    ("all_unconfounded", "both"): (AMCE_UNIFORM, "rule 3"),
}


def parametric_verdict(functional: str, data: str, estimand: str) -> Verdict:
    """Cell of the functional-assumption table (fully confounded graph)."""
    column = _PARAMETRIC_COLUMN[functional]
    estimator = _PARAMETRIC.get((functional, data, estimand))
    return Verdict(estimand, estimator is not None, estimator, f"parametric/{column}")


def structural_verdict(graph_case: str, data: str, estimand: str) -> Verdict:
    """Cell of the structural-assumption table; ATE follows E[Y_a] at both levels."""
    estimator, reason = _STRUCTURAL[(graph_case, data)]
    note = "any weighting of B is valid" if graph_case == "b_no_effect" and estimator else ""
    return Verdict(estimand, estimator is not None, estimator, f"structural/{reason}", note)


def advise(profile: AssumptionProfile, estimand: str) -> Verdict:
    """Identification verdict for a profile.

    Structural results take precedence; otherwise the functional-assumption
    table for the fully confounded graph applies, which stays valid on any
    less confounded graph.
    """
    if estimand not in ESTIMANDS:
        raise ValueError(f"estimand must be one of {', '.join(ESTIMANDS)}; got {estimand!r}")
    if profile.graph_case == "fully_confounded":
        return parametric_verdict(profile.functional, profile.data, estimand)
    structural = structural_verdict(profile.graph_case, profile.data, estimand)
    if structural.identified or profile.functional == "none":
        return structural
    return parametric_verdict(profile.functional, profile.data, estimand)


def estimate(verdict: Verdict, fact: Optional[FactorialDist], obs: Optional[ObservationalDist]) -> Optional[dict]:
    """Apply the verdict's estimator to the data, or None when not identified."""
    if not verdict.identified:
        return None
    if verdict.estimator == OBSERVATIONAL_CONDITIONAL:
        if obs is None:
            raise ValueError("observational data required")
        return observational_conditional(obs)
    if fact is None:
        raise ValueError("factorial data required")
    if verdict.estimator == AMCE_UNIFORM:
        return amce_uniform(fact)
    if obs is None:
        raise ValueError("amce_population needs the distribution of B from observational data")
    return amce_population(fact, obs.b_marginal())
