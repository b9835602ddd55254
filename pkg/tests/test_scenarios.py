import numpy as np
import pytest

from fbounds.model import AssumptionSet, interaction_mass
from fbounds.scenarios import SCENARIO_NAMES, builtin_scenario


def test_all_scenarios_load():
    for name in SCENARIO_NAMES:
        s = builtin_scenario(name)
        assert s.obs.p.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(s.fact.r.sum(axis=2), 1.0)
    with pytest.raises(KeyError):
        builtin_scenario("nope")


def test_example2_arm_means_and_support():
    s = builtin_scenario("example2")
    assert interaction_mass(s.model) == 0.0
    assert s.model.q[AssumptionSet.monotone().forbidden_mask()].sum() == 0.0
    m = s.fact.means()
    # no interaction: the A contrast is the same in both B arms
    assert m[1, 0] - m[0, 0] == pytest.approx(m[1, 1] - m[0, 1], abs=1e-12)
    assert m[1, 0] - m[0, 0] == pytest.approx(0.58, abs=1e-9)


def test_counterexample_margins():
    mono = builtin_scenario("counterexample-mono")
    np.testing.assert_allclose(mono.fact.means(), [[0.85, 1.0], [0.9, 1.0]])
    assert mono.obs.prob(y=0) == pytest.approx(0.15)
    ni = builtin_scenario("counterexample-nointeract")
    m = ni.fact.means()
    assert m[1, 0] - m[0, 0] == pytest.approx(0.5) and m[1, 1] - m[0, 1] == pytest.approx(0.5)
