from fbounds.verify import verify_all, verify_scenario

import pytest


def test_examples_pass():
    for name in ("example1", "example2", "counterexample-mono"):
        checks = verify_scenario(name)
        assert checks and all(c.passed for c in checks), [c.to_dict() for c in checks if not c.passed]


def test_nointeract_report_covers_every_assumption_set():
    checks = verify_scenario("counterexample-nointeract")
    names = {c.name for c in checks}
    for label in ("none", "mono", "no-interaction", "mono+no-interaction"):
        assert f"[{label}] feasibility diagnostic" in names
    assert "[no-interaction] ATE identified at 0.5" in names


def test_unknown_scenario():
    with pytest.raises(KeyError):
        verify_scenario("x")
    assert set(verify_all()) == {"example1", "example2", "counterexample-mono", "counterexample-nointeract"}
