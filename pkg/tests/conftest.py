"""Shared fixtures: an independent LP oracle on scipy and the acceptance summary."""

import itertools
from collections import defaultdict

import numpy as np
import pytest
from scipy.optimize import linprog

# Potential-outcome vectors listed directly, not through the package's bit layout.
TYPES = list(itertools.product((0, 1), repeat=4))  # (Y00, Y01, Y10, Y11)
CELLS = [(a, b, t) for a in (0, 1) for b in (0, 1) for t in range(16)]
NON_INTERACTIVE = {(0, 0, 0, 0), (0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0), (1, 1, 1, 1)}


def y_of(t, a, b):
    return TYPES[t][2 * a + b]


def oracle_forbidden(a, b, t, mono_a=False, mono_b=False, no_inter=False):
    if mono_a and y_of(t, 0, b) > y_of(t, 1, b):
        return True
    if mono_b and y_of(t, a, 0) > y_of(t, a, 1):
        return True
    return no_inter and TYPES[t] not in NON_INTERACTIVE


def oracle_objective(kind):
    c = np.zeros(64)
    for n, (a, b, t) in enumerate(CELLS):
        y1, y0 = y_of(t, 1, b), y_of(t, 0, b)
        c[n] = {"ey_a1": y1, "ey_a0": y0, "ate": y1 - y0}[kind]
    return c


def oracle_bounds(p, r, kind, mono_a=False, mono_b=False, no_inter=False, theta=None):
    """Sharp bounds by HiGHS; ``p``/``r`` are [a, b, y] arrays or None. Returns None when infeasible."""
    rows, rhs = [np.ones(64)], [1.0]
    for a, b, y in itertools.product((0, 1), repeat=3):
        if p is not None:
            rows.append([float(aa == a and bb == b and y_of(t, a, b) == y) for aa, bb, t in CELLS])
            rhs.append(p[a, b, y])
        if r is not None:
            rows.append([float(y_of(t, a, b) == y) for _, _, t in CELLS])
            rhs.append(r[a, b, y])
    ub = [0.0 if oracle_forbidden(a, b, t, mono_a, mono_b, no_inter) else None for a, b, t in CELLS]
    a_ub = b_ub = None
    if theta is not None:
        a_ub = [[float(TYPES[t] not in NON_INTERACTIVE) for _, _, t in CELLS]]
        b_ub = [theta]
    c = oracle_objective(kind)
    out = []
    for sign in (1, -1):
        res = linprog(sign * c, A_ub=a_ub, b_ub=b_ub, A_eq=np.array(rows), b_eq=rhs, bounds=[(0, u) for u in ub], method="highs")
        if res.status == 2:
            return None
        assert res.status == 0, res.message
        out.append(sign * res.fun)
    return tuple(out)


def oracle_forward(q):
    """Forward maps from a flat 64-vector in (a, b, t) order."""
    p = np.zeros((2, 2, 2))
    r = np.zeros((2, 2, 2))
    for n, (a, b, t) in enumerate(CELLS):
        p[a, b, y_of(t, a, b)] += q[n]
        for aa, bb in itertools.product((0, 1), repeat=2):
            r[aa, bb, y_of(t, aa, bb)] += q[n]
    return p, r


@pytest.fixture
def oracle():  # noqa: D103
    return oracle_bounds


# ---- acceptance summary: one line per criterion ----

_CRITERIA = defaultdict(list)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _CRITERIA[marker.args[0]].append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [name for name, ok in results if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(results) - len(failed)}/{len(results)} checks"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(f"criterion {n}: {status} ({detail})")
