"""Sharp bounds on single-treatment effects from 2x2 factorial and observational data."""

__version__ = "0.1.0"

from .bounds import ATE, EY_A0, EY_A1, BoundsResult, Estimand, build_lp, lp_bounds, min_slack, multi_level_bounds
from .closed_form import closed_form_bounds, oracle_sweep, reconcile
from .dataset import Dataset, read_csv, sample_dataset, write_csv
from .identify import AssumptionProfile, Verdict, advise, amce_population, amce_uniform
from .inference import BootstrapResult, bootstrap_bounds, empirical_distributions
from .model import (
    AssumptionSet,
    CanonicalModel,
    FactorialDist,
    ObservationalDist,
    ResponseType,
    SingleTreatmentTruth,
    forward_factorial,
    forward_observational,
    interaction_mass,
    random_model,
    single_treatment_truth,
)
from .scenarios import builtin_scenario
from .sensitivity import SweepCurve, theta_sweep
from .simplex import LinearProgram, LpSolution, solve

__all__ = [
    "ATE",
    "EY_A0",
    "EY_A1",
    "AssumptionProfile",
    "AssumptionSet",
    "BootstrapResult",
    "BoundsResult",
    "CanonicalModel",
    "Dataset",
    "Estimand",
    "FactorialDist",
    "LinearProgram",
    "LpSolution",
    "ObservationalDist",
    "ResponseType",
    "SingleTreatmentTruth",
    "SweepCurve",
    "Verdict",
    "advise",
    "amce_population",
    "amce_uniform",
    "bootstrap_bounds",
    "build_lp",
    "builtin_scenario",
    "closed_form_bounds",
    "empirical_distributions",
    "forward_factorial",
    "forward_observational",
    "interaction_mass",
    "lp_bounds",
    "min_slack",
    "multi_level_bounds",
    "oracle_sweep",
    "random_model",
    "read_csv",
    "reconcile",
    "sample_dataset",
    "single_treatment_truth",
    "solve",
    "theta_sweep",
    "write_csv",
]
