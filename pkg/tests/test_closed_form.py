import numpy as np
import pytest

from conftest import oracle_bounds
from fbounds.bounds import ATE, EY_A0, EY_A1
from fbounds.closed_form import (
    BOTH,
    BOTH_MONOTONE,
    CANONICAL,
    CONFLICTS,
    CORRECTIONS,
    FACTORIAL,
    FACTORIAL_MONOTONE,
    PRINTED,
    ExpressionError,
    MissingDataError,
    closed_form_bounds,
    correction_report,
    evaluate,
    expressions,
    instantiate,
    is_defined,
    oracle_sweep,
    parse,
    reconcile,
    regime_for,
    sweep_cases,
    uses_observational,
)
from fbounds.model import AssumptionSet, forward_factorial, forward_observational, random_model
from fbounds.scenarios import builtin_scenario


def test_parse_terms():
    terms = parse("1 - 2 Pr(a1,b0,y1) + Pr(Y_a0b1=y0)")
    assert [t.coef for t in terms] == [1, -2, 1]
    with pytest.raises(ExpressionError):
        parse("Pr(q1)")
    with pytest.raises(ExpressionError):
        parse("Pr(Y_a0b1=y1")


def test_evaluate_against_distribution():
    s = builtin_scenario("example1")
    assert evaluate("Pr(Y_a1b0=y1)", None, s.fact) == pytest.approx(s.fact.r[1, 0, 1])
    assert evaluate("Pr(a1,y1)", s.obs, s.fact) == pytest.approx(s.obs.prob(a=1, y=1))
    assert evaluate("Pr(b1)", s.obs, s.fact) == pytest.approx(s.obs.prob(b=1))
    assert evaluate("1 - Pr(y1)", s.obs, s.fact) == pytest.approx(s.obs.prob(y=0))
    assert uses_observational("Pr(a0,b1)") and not uses_observational("Pr(Y_a0b1=y1)")
    with pytest.raises(MissingDataError):
        evaluate("Pr(a1,y1)", None, s.fact)


def test_instantiate_template():
    assert instantiate("Pr(Y_ab=y) + Pr(Y_ab'=y')", a=1, b=0) == "Pr(Y_a1b0=y1) + Pr(Y_a1b1=y0)"
    assert instantiate("Pr(a',b,y)", a=0, b=1) == "Pr(a1,b1,y1)"


def test_every_canonical_expression_parses():
    for (regime, kind), bl in CANONICAL.items():
        for est in ((EY_A1, EY_A0) if kind == "ey" else (ATE,)):
            if not is_defined(regime, est):
                continue
            lower, upper = expressions(regime, est)
            for text in lower + upper:
                parse(text)


def test_printed_lists_differ_from_canonical_only_at_corrections():
    for printed in PRINTED:
        canon = CANONICAL[(printed.regime, printed.estimand)]
        for side in ("lower", "upper"):
            changed = {i for i, (p, c) in enumerate(zip(getattr(printed, side), getattr(canon, side))) if p != c}
            listed = {c.index for c in CORRECTIONS if (c.regime, c.estimand, c.side) == (printed.regime, printed.estimand, side)}
            assert changed == listed


def test_monotone_ey_defined_for_a1_only():
    assert is_defined(BOTH_MONOTONE, EY_A1) and not is_defined(BOTH_MONOTONE, EY_A0)
    assert is_defined(FACTORIAL, EY_A0)
    assert len(sweep_cases()) == 10
    with pytest.raises(ValueError):
        closed_form_bounds(EY_A0, builtin_scenario("example2").fact, monotone=True)


def test_regime_selection():
    assert regime_for(False, False) == FACTORIAL
    assert regime_for(True, True) == BOTH_MONOTONE
    s = builtin_scenario("example1")
    with pytest.raises(MissingDataError):
        closed_form_bounds(ATE, s.fact, None, regime=BOTH)


@pytest.mark.parametrize(
    "regime,estimand",
    [(FACTORIAL, EY_A1), (FACTORIAL, EY_A0), (BOTH, EY_A1), (BOTH, EY_A0), (BOTH, ATE), (FACTORIAL_MONOTONE, ATE)],
    ids=lambda x: getattr(x, "kind", x),
)
def test_sharp_cases_match_scipy(regime, estimand):
    mono = regime in (FACTORIAL_MONOTONE, BOTH_MONOTONE)
    flags = {"mono_a": True, "mono_b": True} if mono else {}
    for i in range(30):
        model = random_model([21, i], AssumptionSet.monotone() if mono else None)
        fact = forward_factorial(model)
        obs = forward_observational(model) if regime in (BOTH, BOTH_MONOTONE) else None
        cf = closed_form_bounds(estimand, fact, obs, mono, regime)
        ref = oracle_bounds(None if obs is None else obs.p, fact.r, estimand.kind, **flags)
        assert (cf.lower, cf.upper) == pytest.approx(ref, abs=1e-6)


def test_sweep_summary_counts():
    summary = oracle_sweep(BOTH, ATE, n_models=20, seed=1)
    assert summary.sharp == 20 and summary.passed
    d = summary.to_dict()
    assert d["models"] == 20 and d["invalid"] == 0


def test_reconcile_report():
    s = builtin_scenario("example2")
    report = reconcile(ATE, s.fact, s.obs, AssumptionSet())
    assert report["regime"] == BOTH and report["agree"]
    assert any(c["index"] == 15 for c in report["corrections_applied"])
    flagged = [v for v in report["variants"] if v["flagged"]]
    assert all(v["discrepancy"] is None or v["discrepancy"] > 1e-6 for v in flagged)
    assert reconcile(ATE, s.fact, s.obs, AssumptionSet(no_interaction=True))["closed_form"] is None
    audit = correction_report()
    assert len(audit["corrections"]) == len(CORRECTIONS) and len(audit["conflicts"]) == len(CONFLICTS)


def test_closed_form_at_counterexample_mono():
    s = builtin_scenario("counterexample-mono")
    cf = closed_form_bounds(EY_A1, s.fact, s.obs, monotone=True)
    assert cf.upper == pytest.approx(1.0, abs=1e-9)


def test_conflict_chosen_form_is_in_canonical_list():
    for c in CONFLICTS:
        assert getattr(CANONICAL[(c.regime, c.estimand)], c.side)[c.index] == c.chosen


def test_monotone_closed_forms_stay_valid():
    for regime in (FACTORIAL_MONOTONE, BOTH_MONOTONE):
        for estimand in (EY_A1, ATE):
            summary = oracle_sweep(regime, estimand, n_models=200, seed=77)
            assert summary.invalid == 0, summary.to_dict()
