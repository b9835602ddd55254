import numpy as np
import pytest

from fbounds.identify import (
    AssumptionProfile,
    Verdict,
    advise,
    amce_population,
    amce_uniform,
    estimate,
    observational_conditional,
)
from fbounds.model import (
    AssumptionSet,
    CanonicalModel,
    FactorialDist,
    forward_factorial,
    forward_observational,
    random_model,
    single_treatment_truth,
)
from fbounds.scenarios import builtin_scenario


def test_amce_values():
    s = builtin_scenario("example1")
    assert amce_uniform(s.fact)["ate"] == pytest.approx(-0.254, abs=1e-12)
    assert amce_population(s.fact, (0.2, 0.8))["ate"] == pytest.approx(-0.07616, abs=1e-12)
    m = s.fact.means()
    assert amce_population(s.fact, (1.0, 0.0))["ate"] == pytest.approx(m[1, 0] - m[0, 0])
    e2 = builtin_scenario("example2")
    assert amce_uniform(e2.fact)["ate"] == pytest.approx(0.58, abs=1e-9)
    assert amce_population(e2.fact, e2.obs.b_marginal())["ate"] == pytest.approx(0.58, abs=1e-9)
    flat = FactorialDist.from_means([[0.3, 0.3], [0.3, 0.3]])
    assert amce_uniform(flat)["ate"] == 0.0


@pytest.mark.parametrize("p_b", [(0.5, 0.6), (1.2, -0.2), (0.5,), (np.nan, 1.0)])
def test_invalid_weights(p_b):
    with pytest.raises(ValueError):
        amce_population(builtin_scenario("example1").fact, p_b)


def _b_independent_model(seed):
    """Response type independent of natural B given A."""
    rng = np.random.default_rng(seed)
    q = np.zeros((2, 2, 16))
    for a in (0, 1):
        types = rng.dirichlet(np.ones(16))
        q[a] = np.outer(rng.dirichlet([1, 1]) * [1, 1], types)
    pa = rng.dirichlet([1, 1])
    q = q / q.sum(axis=(1, 2), keepdims=True) * pa[:, None, None]
    return CanonicalModel(q)


def test_population_amce_identifies_when_type_independent_of_b():
    for seed in range(50):
        # type independent of both natural treatments: B and Y unconfounded
        rng = np.random.default_rng(seed)
        q = np.einsum("ab,t->abt", rng.dirichlet(np.ones(4)).reshape(2, 2), rng.dirichlet(np.ones(16)))
        model = CanonicalModel(q)
        truth = single_treatment_truth(model)
        est = amce_population(forward_factorial(model), forward_observational(model).b_marginal())
        assert est["ate"] == pytest.approx(truth.ate, abs=1e-9)
        assert est["ey_a1"] == pytest.approx(truth.ey_a1, abs=1e-9)


def test_uniform_amce_identifies_ate_without_interaction():
    for i in range(50):
        model = random_model([31, i], AssumptionSet(no_interaction=True))
        assert amce_uniform(forward_factorial(model))["ate"] == pytest.approx(single_treatment_truth(model).ate, abs=1e-9)


def test_observational_conditional():
    s = builtin_scenario("example2")
    res = observational_conditional(s.obs)
    assert res["ey_a1"] == pytest.approx(s.obs.prob(a=1, y=1) / s.obs.prob(a=1))


def test_verdict_invariant():
    with pytest.raises(ValueError):
        Verdict("ATE", True, None, "x")
    with pytest.raises(ValueError):
        Verdict("ATE", False, "amce_uniform", "x")
    with pytest.raises(ValueError):
        AssumptionProfile("weird", "none", "both")
    with pytest.raises(ValueError):
        advise(AssumptionProfile(), "EY_b")


def test_advise_examples():
    assert not advise(AssumptionProfile("fully_confounded", "monotone", "factorial"), "ATE").identified
    assert advise(AssumptionProfile("fully_confounded", "linear_additive", "factorial"), "EY_a").identified
    assert not advise(AssumptionProfile("fully_confounded", "none", "both"), "EY_a").identified
    # a functional assumption still helps on a partly confounded graph
    v = advise(AssumptionProfile("b_unconfounded", "no_interaction", "factorial"), "ATE")
    assert v.identified and v.estimator == "amce_uniform"


def test_estimate_applies_estimator():
    s = builtin_scenario("example1")
    v = advise(AssumptionProfile("b_unconfounded", "none", "both"), "EY_a")
    assert estimate(v, s.fact, s.obs)["ate"] == pytest.approx(-0.07616)
    assert estimate(advise(AssumptionProfile(), "ATE"), s.fact, s.obs) is None
    with pytest.raises(ValueError):
        estimate(v, s.fact, None)
