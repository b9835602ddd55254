"""Canonical principal-strata model for two binary treatments and a binary outcome.

A unit is described by its natural treatment levels ``(a, b)`` and its response
type ``t``, the vector of potential outcomes
``(Y_{a0,b0}, Y_{a0,b1}, Y_{a1,b0}, Y_{a1,b1}) = (i, j, k, l)``. Response types
are indexed 0..15 by the binary number ``ijkl`` with ``i`` most significant, so
``t = 0b0011`` is the unit that responds to ``A`` only.

Model masses are stored as float arrays of shape ``(2, 2, 16)`` indexed
``[a, b, t]``; flattening in C order gives the 64 LP variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

TOL = 1e-12
N_TYPES = 16

#: Response types whose A-contrast does not depend on B.
NON_INTERACTIVE_TYPES = (0b0000, 0b0011, 0b0101, 0b1010, 0b1100, 0b1111)
INTERACTIVE_TYPES = tuple(t for t in range(N_TYPES) if t not in NON_INTERACTIVE_TYPES)


class ModelError(ValueError):
    """Raised when a distribution or model violates its invariants."""


@dataclass(frozen=True)
class ResponseType:
    i: int
    j: int
    k: int
    l: int  # noqa: E741

    @classmethod
    def from_index(cls, t: int) -> "ResponseType":
        if not 0 <= t < N_TYPES:
            raise ValueError(f"response type index out of range: {t}")
        return cls((t >> 3) & 1, (t >> 2) & 1, (t >> 1) & 1, t & 1)

    @property
    def index(self) -> int:
        return (self.i << 3) | (self.j << 2) | (self.k << 1) | self.l

    def outcome(self, a: int, b: int) -> int:
        """Potential outcome ``Y_{a,b}`` of this type."""
        return (self.i, self.j, self.k, self.l)[2 * a + b]

    def __str__(self) -> str:
        return f"y{self.i}{self.j}{self.k}{self.l}"


# OUTCOME[t, a, b] = Y_{a,b} for response type t
OUTCOME = np.array(
    [[[ResponseType.from_index(t).outcome(a, b) for b in (0, 1)] for a in (0, 1)] for t in range(N_TYPES)],
    dtype=np.int8,
)


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CanonicalModel:
    """Joint mass over natural ``(a, b)`` and response type."""

    q: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q)
        if q.shape != (2, 2, N_TYPES):
            raise ModelError(f"model must have shape (2, 2, 16), got {q.shape}")
        if not np.all(np.isfinite(q)) or q.min() < -TOL:
            raise ModelError("model masses must be finite and nonnegative")
        if abs(q.sum() - 1.0) > TOL:
            raise ModelError(f"model masses sum to {q.sum():.15g}, expected 1")
        object.__setattr__(self, "q", q)

    @classmethod
    def point_mass(cls, a: int, b: int, t: int) -> "CanonicalModel":
        q = np.zeros((2, 2, N_TYPES))
        q[a, b, t] = 1.0
        return cls(q)

    @classmethod
    def uniform(cls) -> "CanonicalModel":
        return cls(np.full((2, 2, N_TYPES), 1.0 / 64))

    def treatment_marginal(self) -> np.ndarray:
        """``Pr(A=a, B=b)`` as a 2x2 array."""
        return self.q.sum(axis=2)

    def vector(self) -> np.ndarray:
        return self.q.reshape(-1)


@dataclass(frozen=True, eq=False)
class ObservationalDist:
    """``Pr(A=a, B=b, Y=y)`` stored as ``p[a, b, y]``."""

    p: np.ndarray

    def __post_init__(self):
        p = _frozen(self.p)
        if p.shape != (2, 2, 2):
            raise ModelError(f"observational distribution must have shape (2, 2, 2), got {p.shape}")
        if not np.all(np.isfinite(p)) or p.min() < -TOL:
            raise ModelError("observational probabilities must be finite and nonnegative")
        if abs(p.sum() - 1.0) > TOL:
            raise ModelError(f"observational probabilities sum to {p.sum():.15g}, expected 1")
        object.__setattr__(self, "p", p)

    def prob(self, a: Optional[int] = None, b: Optional[int] = None, y: Optional[int] = None) -> float:
        """Marginal probability with unspecified coordinates summed out."""
        sl = tuple(slice(None) if v is None else v for v in (a, b, y))
        return float(np.sum(self.p[sl]))

    def b_marginal(self) -> np.ndarray:
        return self.p.sum(axis=(0, 2))


@dataclass(frozen=True, eq=False)
class FactorialDist:
    """``Pr(Y_{a,b} = y)`` stored as ``r[a, b, y]``; each arm sums to one."""

    r: np.ndarray

    def __post_init__(self):
        r = _frozen(self.r)
        if r.shape != (2, 2, 2):
            raise ModelError(f"factorial distribution must have shape (2, 2, 2), got {r.shape}")
        if not np.all(np.isfinite(r)) or r.min() < -TOL:
            raise ModelError("factorial probabilities must be finite and nonnegative")
        arm_sums = r.sum(axis=2)
        if np.max(np.abs(arm_sums - 1.0)) > TOL:
            raise ModelError(f"each factorial arm must sum to 1, got {arm_sums.tolist()}")
        object.__setattr__(self, "r", r)

    @classmethod
    def from_means(cls, means) -> "FactorialDist":
        """Build from ``E[Y_{a,b}]`` given as a 2x2 array."""
        m = np.asarray(means, dtype=float)
        return cls(np.stack([1.0 - m, m], axis=-1))

    def mean(self, a: int, b: int) -> float:
        return float(self.r[a, b, 1])

    def means(self) -> np.ndarray:
        return self.r[:, :, 1].copy()


@dataclass(frozen=True)
class SingleTreatmentTruth:
    ey_a0: float
    ey_a1: float

    @property
    def ate(self) -> float:
        return self.ey_a1 - self.ey_a0

    def value(self, kind: str) -> float:
        return {"ey_a1": self.ey_a1, "ey_a0": self.ey_a0, "ate": self.ate}[kind]


@dataclass(frozen=True)
class AssumptionSet:
    """Functional restrictions on the canonical model.

    Monotonicity is imposed at the natural level of the other treatment:
    ``monotone_a`` forbids ``Y_{a0,B} > Y_{a1,B}`` and ``monotone_b`` forbids
    ``Y_{A,b0} > Y_{A,b1}``. ``max_interaction`` caps the total mass on
    interactive response types.
    """

    monotone_a: bool = False
    monotone_b: bool = False
    no_interaction: bool = False
    max_interaction: Optional[float] = None

    def __post_init__(self):
        theta = self.max_interaction
        if theta is not None:
            theta = float(theta)
            if not 0.0 <= theta <= 1.0:
                raise ModelError(f"max_interaction must lie in [0, 1], got {theta}")
            if theta == 0.0 or self.no_interaction:
                object.__setattr__(self, "no_interaction", True)
                theta = None
            elif theta == 1.0:
                # a cap of one never binds
                theta = None
        object.__setattr__(self, "max_interaction", theta)

    @classmethod
    def monotone(cls) -> "AssumptionSet":
        return cls(monotone_a=True, monotone_b=True)

    def with_theta(self, theta: Optional[float]) -> "AssumptionSet":
        return AssumptionSet(self.monotone_a, self.monotone_b, self.no_interaction, theta)

    def forbidden_mask(self) -> np.ndarray:
        """Boolean ``(2, 2, 16)`` array, True where the mass must be zero."""
        mask = np.zeros((2, 2, N_TYPES), dtype=bool)
        for t in range(N_TYPES):
            i, j, k, l = (t >> 3) & 1, (t >> 2) & 1, (t >> 1) & 1, t & 1  # noqa: E741
            for a in (0, 1):
                for b in (0, 1):
                    if self.monotone_a and ((b == 0 and i > k) or (b == 1 and j > l)):
                        mask[a, b, t] = True
                    if self.monotone_b and ((a == 0 and i > j) or (a == 1 and k > l)):
                        mask[a, b, t] = True
            if self.no_interaction and t in INTERACTIVE_TYPES:
                mask[:, :, t] = True
        return mask

    def label(self) -> str:
        parts = []
        if self.monotone_a and self.monotone_b:
            parts.append("monotone")
        elif self.monotone_a:
            parts.append("monotone_a")
        elif self.monotone_b:
            parts.append("monotone_b")
        if self.no_interaction:
            parts.append("no_interaction")
        if self.max_interaction is not None:
            parts.append(f"max_interaction={self.max_interaction:g}")
        return "+".join(parts) or "none"


def forward_observational(model: CanonicalModel) -> ObservationalDist:
    p = np.zeros((2, 2, 2))
    for a in (0, 1):
        for b in (0, 1):
            y = OUTCOME[:, a, b]
            p[a, b, 1] = model.q[a, b, y == 1].sum()
            p[a, b, 0] = model.q[a, b, y == 0].sum()
    return ObservationalDist(p)


def forward_factorial(model: CanonicalModel) -> FactorialDist:
    type_mass = model.q.sum(axis=(0, 1))
    r = np.zeros((2, 2, 2))
    for a in (0, 1):
        for b in (0, 1):
            y = OUTCOME[:, a, b]
            r[a, b, 1] = type_mass[y == 1].sum()
            r[a, b, 0] = type_mass[y == 0].sum()
    return FactorialDist(r)


def single_treatment_truth(model: CanonicalModel) -> SingleTreatmentTruth:
    """``E[Y_a]`` under intervention on ``A`` alone, ``B`` left at its natural level."""
    ey = [0.0, 0.0]
    for a in (0, 1):
        for b in (0, 1):
            ey[a] += float(np.sum(model.q[:, b, :] * OUTCOME[:, a, b]))
    return SingleTreatmentTruth(ey_a0=ey[0], ey_a1=ey[1])


def interaction_mass(model: CanonicalModel) -> float:
    return float(model.q[:, :, list(INTERACTIVE_TYPES)].sum())


def random_model(seed, assumptions: Optional[AssumptionSet] = None) -> CanonicalModel:
    """Draw a model uniformly from the simplex restricted to the assumption support.

    Uses normalized exponential spacings (a flat Dirichlet). A ``max_interaction``
    cap is met by shrinking the interactive mass onto the cap when exceeded.
    """
    assumptions = assumptions or AssumptionSet()
    rng = np.random.default_rng(seed)
    w = rng.exponential(size=(2, 2, N_TYPES))
    w[assumptions.forbidden_mask()] = 0.0
    total = w.sum()
    if total <= 0.0:
        raise ModelError(f"assumption set {assumptions.label()} leaves an empty support")
    w /= total
    theta = assumptions.max_interaction
    if theta is not None:
        inter = list(INTERACTIVE_TYPES)
        m = w[:, :, inter].sum()
        if m > theta:
            rest = 1.0 - m
            if rest <= 0.0:
                raise ModelError("no non-interactive support to absorb the interaction cap")
            w[:, :, inter] *= theta / m
            non = [t for t in range(N_TYPES) if t not in INTERACTIVE_TYPES]
            w[:, :, non] *= (1.0 - theta) / rest
        w /= w.sum()
    return CanonicalModel(w)
