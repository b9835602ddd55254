import numpy as np
import pytest

from fbounds.bounds import ATE, EY_A1, lp_bounds
from fbounds.dataset import EXP, OBS, Dataset, sample_dataset
from fbounds.inference import (
    EmptyArmError,
    bootstrap_bounds,
    empirical_distributions,
    percentile_ranks,
    resample,
)
from fbounds.model import AssumptionSet
from fbounds.scenarios import builtin_scenario


@pytest.fixture(scope="module")
def example2_data():
    return sample_dataset(builtin_scenario("example2").model, 400, 100, seed=5)


@pytest.mark.parametrize(
    "b,alpha,ranks", [(200, 0.05, (5, 195)), (1000, 0.05, (25, 975)), (10, 0.05, (1, 10)), (1, 0.5, (1, 1))]
)
def test_percentile_ranks(b, alpha, ranks):
    assert percentile_ranks(b, alpha) == ranks


def test_empirical_distributions(example2_data):
    emp = empirical_distributions(example2_data)
    assert emp.obs_counts.sum() == 400 and emp.fact_counts.sum() == 400
    np.testing.assert_allclose(emp.fact.r.sum(axis=2), 1.0)
    counts = emp.counts_dict()
    assert sum(counts["observational"].values()) == 400


def test_empty_arm_rejected():
    data = Dataset.from_rows([("exp", 0, 0, 1), ("exp", 0, 1, 0), ("exp", 1, 0, 1)])
    with pytest.raises(EmptyArmError, match="a=1, b=1"):
        empirical_distributions(data)
    only_obs = Dataset.from_rows([("obs", 0, 0, 1), ("obs", 1, 1, 0)])
    assert empirical_distributions(only_obs).fact is None


def test_resample_preserves_regime_and_arm_sizes(example2_data):
    rep = resample(example2_data, np.random.default_rng(0))
    assert rep.n_obs == example2_data.n_obs
    np.testing.assert_array_equal(rep.arm_sizes(), example2_data.arm_sizes())
    assert len(rep) == len(example2_data)


def test_bootstrap_deterministic_and_ordered(example2_data):
    a = bootstrap_bounds(example2_data, ATE, None, replicates=30, seed=9)
    b = bootstrap_bounds(example2_data, ATE, None, replicates=30, seed=9)
    assert a.to_dict() == b.to_dict()
    assert a.ci_lower[0] <= a.ci_lower[1] and a.ci_upper[0] <= a.ci_upper[1]
    c = bootstrap_bounds(example2_data, ATE, None, replicates=30, seed=10)
    assert c.to_dict() != a.to_dict()
    d = a.to_dict()
    assert d["method"] == "percentile" and d["replicates"] == 30


def test_bootstrap_with_assumptions_uses_slack(example2_data):
    # sampling noise makes the no-interaction program infeasible without slack
    res = bootstrap_bounds(example2_data, ATE, AssumptionSet(max_interaction=0.0), replicates=20, seed=1)
    assert res.failed == 0
    assert res.point.feasible
    assert res.to_dict()["slack"]["nonzero"] >= 1


def test_bootstrap_argument_checks(example2_data):
    with pytest.raises(ValueError):
        bootstrap_bounds(example2_data, replicates=0)
    with pytest.raises(ValueError):
        bootstrap_bounds(example2_data, alpha=1.0)


@pytest.mark.slow
def test_coverage_smoke():
    """Endpoint coverage over repeated samples stays near nominal."""
    s = builtin_scenario("example2")
    target = lp_bounds(s.obs, s.fact, None, EY_A1)
    hits = 0
    runs = 50
    for k in range(runs):
        data = sample_dataset(s.model, 500, 125, seed=[100, k])
        res = bootstrap_bounds(data, EY_A1, None, replicates=100, alpha=0.1, seed=k)
        hits += res.ci_lower[0] <= target.lower <= res.ci_lower[1] and res.ci_upper[0] <= target.upper <= res.ci_upper[1]
    # joint coverage of two 90% intervals; loose floor to keep the test stable
    assert hits / runs >= 0.6
