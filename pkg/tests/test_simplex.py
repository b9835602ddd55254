import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from fbounds.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, LPDimensionError, solve


def test_textbook_max():
    # max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    lp = LinearProgram.from_rows([3, 5], ineq_rows=[([1, 0], 4), ([0, 2], 12), ([3, 2], 18)])
    sol = solve(lp, "max")
    assert sol.status == OPTIMAL
    assert sol.value == pytest.approx(36)
    np.testing.assert_allclose(sol.point, [2, 6], atol=1e-9)


def test_infeasible_and_unbounded():
    lp = LinearProgram.from_rows([1, 1], eq_rows=[([1, 1], 1)], ineq_rows=[([1, 1], 0.5)])
    assert solve(lp).status == INFEASIBLE
    lp = LinearProgram.from_rows([1, -1], ineq_rows=[([1, -1], 1)])
    assert solve(lp, "max").status == OPTIMAL
    assert solve(lp, "min").status == UNBOUNDED


def test_variable_bounds_and_free_variables():
    # min x st x >= -3 (lower bound), x free above
    lp = LinearProgram.from_rows([1], var_lower=[-3], var_upper=[np.inf])
    assert solve(lp).value == pytest.approx(-3)
    lp = LinearProgram.from_rows([1, 0], eq_rows=[([1, 1], 2)], var_lower=[-np.inf, 0], var_upper=[np.inf, 5])
    assert solve(lp).value == pytest.approx(-3)


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [-0.75, 150, -0.02, 6]
    rows = [([0.25, -60, -0.04, 9], 0), ([0.5, -90, -0.02, 3], 0), ([0, 0, 1, 0], 1)]
    sol = solve(LinearProgram.from_rows(c, ineq_rows=rows))
    assert sol.status == OPTIMAL
    assert sol.value == pytest.approx(-0.05)


def test_dimension_errors():
    with pytest.raises(LPDimensionError):
        LinearProgram([1, 2], eq_matrix=[[1, 2, 3]], eq_rhs=[1])
    with pytest.raises(LPDimensionError):
        LinearProgram([1], var_lower=[2], var_upper=[1])
    with pytest.raises(ValueError):
        solve(LinearProgram.from_rows([1]), "sideways")


@st.composite
def random_lp(draw):
    n = draw(st.integers(2, 6))
    m_eq = draw(st.integers(0, 3))
    m_ub = draw(st.integers(0, 4))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(0, 2, n)  # keeps the equalities feasible
    a_eq = rng.integers(-3, 4, (m_eq, n)).astype(float)
    a_ub = rng.integers(-3, 4, (m_ub, n)).astype(float)
    slack = rng.choice([0.0, 1.0], m_ub) * rng.uniform(0, 1, m_ub)
    upper = np.where(rng.random(n) < 0.5, rng.uniform(2, 4, n), np.inf)
    return (
        rng.integers(-5, 6, n).astype(float),
        a_eq, a_eq @ x0, a_ub, a_ub @ x0 + slack - rng.choice([0.0, 3.0], m_ub), upper,
    )


@settings(max_examples=150, deadline=None)
@given(random_lp(), st.sampled_from(["min", "max"]))
def test_agrees_with_highs(problem, direction):
    c, a_eq, b_eq, a_ub, b_ub, upper = problem
    lp = LinearProgram(c, a_eq, b_eq, a_ub, b_ub, np.zeros(len(c)), upper)
    sign = 1 if direction == "min" else -1
    ref = linprog(sign * c, A_ub=a_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None,
                  A_eq=a_eq if len(b_eq) else None, b_eq=b_eq if len(b_eq) else None,
                  bounds=[(0, u if np.isfinite(u) else None) for u in upper], method="highs-ds",
                  options={"presolve": False})
    sol = solve(lp, direction)
    expected = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    assert sol.status == expected
    if sol.optimal:
        assert sol.value == pytest.approx(sign * ref.fun, abs=1e-7)
        assert lp.residual(sol.point) <= 1e-8
        assert float(c @ sol.point) == pytest.approx(sol.value, abs=1e-9)
