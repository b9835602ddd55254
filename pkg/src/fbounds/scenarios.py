"""Builtin scenarios: two worked examples and two counterexample margin sets.

All probabilities are built from exact rationals before conversion to float.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .model import (
    CanonicalModel,
    FactorialDist,
    ObservationalDist,
    ResponseType,
    SingleTreatmentTruth,
    forward_factorial,
    forward_observational,
    single_treatment_truth,
)

NoiseConfig = Tuple[int, ...]


@dataclass(frozen=True)
class StructuralScenario:
    """Finite noise space plus deterministic equations.

    ``equations(u)`` returns ``(natural_a, natural_b, outcome)`` where
    ``outcome(a, b)`` gives ``Y`` under the intervention ``do(A=a, B=b)``.
    """

    name: str
    noise_space: Sequence[Tuple[NoiseConfig, Fraction]]
    equations: Callable[[NoiseConfig], Tuple[int, int, Callable[[int, int], int]]]

    def __post_init__(self):
        probs = [p for _, p in self.noise_space]
        if any(p < 0 for p in probs) or sum(probs) != 1:
            raise ValueError(f"noise probabilities of {self.name} must be nonnegative and sum to 1")

    def canonical_model(self) -> CanonicalModel:
        mass: Dict[Tuple[int, int, int], Fraction] = {}
        for u, prob in self.noise_space:
            a, b, outcome = self.equations(u)
            t = ResponseType(outcome(0, 0), outcome(0, 1), outcome(1, 0), outcome(1, 1)).index
            mass[(a, b, t)] = mass.get((a, b, t), Fraction(0)) + prob
        q = np.zeros((2, 2, 16))
        for (a, b, t), m in mass.items():
            q[a, b, t] = float(m)
        return CanonicalModel(q)


def _bernoulli_noise(params: Sequence[Fraction]):
    space = []
    for bits in itertools.product((0, 1), repeat=len(params)):
        prob = Fraction(1)
        for bit, p in zip(bits, params):
            prob *= p if bit else 1 - p
        space.append((bits, prob))
    return space


def _example1_equations(u: NoiseConfig):
    u_ay, u_by, u_y1, u_y2 = u

    def outcome(a: int, b: int) -> int:
        # conjunction binds tighter than xor
        return (u_ay & (1 - ((u_y1 & b) ^ (u_by & u_y1)))) ^ (a ^ u_y2)

    return u_ay, u_by, outcome


EXAMPLE1 = StructuralScenario(
    name="example1",
    noise_space=_bernoulli_noise([Fraction(65, 100), Fraction(8, 10), Fraction(95, 100), Fraction(9, 10)]),
    equations=_example1_equations,
)

# Pr(a, b) and Pr(y_ijkl | a, b) for the strata-table example; unlisted types have zero mass.
EXAMPLE2_TREATMENT = {(0, 0): Fraction(15, 100), (0, 1): Fraction(50, 100), (1, 0): Fraction(10, 100), (1, 1): Fraction(25, 100)}
EXAMPLE2_STRATA = {
    0b0000: {(0, 0): "0.05", (0, 1): "0.09", (1, 0): "0.05", (1, 1): "0.12"},
    0b0011: {(0, 0): "0.7", (0, 1): "0.6", (1, 0): "0.5", (1, 1): "0.5"},
    0b0101: {(0, 0): "0.1", (0, 1): "0.1", (1, 0): "0.02", (1, 1): "0.03"},
    0b1111: {(0, 0): "0.15", (0, 1): "0.21", (1, 0): "0.43", (1, 1): "0.35"},
}


def example2_model() -> CanonicalModel:
    q = np.zeros((2, 2, 16))
    for t, column in EXAMPLE2_STRATA.items():
        for ab, cond in column.items():
            q[ab + (t,)] = float(EXAMPLE2_TREATMENT[ab] * Fraction(cond))
    return CanonicalModel(q)


def _obs_from_table(cells: Dict[Tuple[int, int, int], str]) -> ObservationalDist:
    p = np.zeros((2, 2, 2))
    for key, v in cells.items():
        p[key] = float(Fraction(v))
    return ObservationalDist(p)


def _fact_from_table(means: Dict[Tuple[int, int], str]) -> FactorialDist:
    m = np.zeros((2, 2))
    for key, v in means.items():
        m[key] = float(Fraction(v))
    return FactorialDist.from_means(m)


# Margins shared by both monotone models of the first counterexample.
COUNTEREXAMPLE_MONO_OBS = {
    (0, 0, 0): "0.15", (0, 1, 0): "0", (1, 0, 0): "0", (1, 1, 0): "0",
    (0, 0, 1): "0.1", (0, 1, 1): "0.25", (1, 0, 1): "0.25", (1, 1, 1): "0.25",
}
COUNTEREXAMPLE_MONO_FACT = {(0, 0): "0.85", (0, 1): "1", (1, 0): "0.9", (1, 1): "1"}
# E[Y_{a1}] under the two models; both are consistent with the margins above.
COUNTEREXAMPLE_MONO_EY_A1 = (1.0, 0.9)

COUNTEREXAMPLE_NOINTERACT_OBS = {
    (0, 0, 0): "0.1", (0, 1, 0): "0", (1, 0, 0): "0", (1, 1, 0): "0",
    (0, 0, 1): "0.1", (0, 1, 1): "0.2", (1, 0, 1): "0", (1, 1, 1): "0.6",
}
COUNTEREXAMPLE_NOINTERACT_FACT = {(0, 0): "0.1", (0, 1): "0.4", (1, 0): "0.6", (1, 1): "0.9"}


@dataclass(frozen=True)
class Scenario:
    name: str
    obs: ObservationalDist
    fact: FactorialDist
    model: Optional[CanonicalModel] = None
    truth: Optional[SingleTreatmentTruth] = None


def _from_model(name: str, model: CanonicalModel) -> Scenario:
    return Scenario(
        name=name,
        obs=forward_observational(model),
        fact=forward_factorial(model),
        model=model,
        truth=single_treatment_truth(model),
    )


SCENARIO_NAMES = ("example1", "example2", "counterexample-mono", "counterexample-nointeract")


def builtin_scenario(name: str) -> Scenario:
    if name == "example1":
        return _from_model(name, EXAMPLE1.canonical_model())
    if name == "example2":
        return _from_model(name, example2_model())
    if name == "counterexample-mono":
        return Scenario(name, _obs_from_table(COUNTEREXAMPLE_MONO_OBS), _fact_from_table(COUNTEREXAMPLE_MONO_FACT))
    if name == "counterexample-nointeract":
        return Scenario(
            name, _obs_from_table(COUNTEREXAMPLE_NOINTERACT_OBS), _fact_from_table(COUNTEREXAMPLE_NOINTERACT_FACT)
        )
    raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")
