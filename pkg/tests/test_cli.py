import json
import subprocess
import sys

import pytest

from fbounds.cli import main
from fbounds.jsonio import write_distributions
from fbounds.scenarios import builtin_scenario


@pytest.fixture
def dists(tmp_path):
    def make(name):
        s = builtin_scenario(name)
        path = tmp_path / f"{name}.json"
        write_distributions(path, s.obs, s.fact)
        return str(path)

    return make


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_json(capsys, dists):
    code, out, _ = run(capsys, "bounds", "--data", dists("example2"), "--method", "both")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["lp"]["lower"] == pytest.approx(0.3005, abs=1e-9)
    assert report["results"]["discrepancy"] <= 1e-6
    assert len(next(iter(report["inputs"].values()))) == 64


def test_bounds_output_is_byte_identical(capsys, dists):
    path = dists("example1")
    outputs = [run(capsys, "bounds", "--data", path, "--method", "both")[1] for _ in range(2)]
    assert outputs[0] == outputs[1]


def test_infeasible_exit_code(capsys, dists):
    path = dists("counterexample-mono")
    code, out, _ = run(capsys, "bounds", "--data", path, "--assume", "no-interaction", "--slack", "0")
    assert code == 3 and json.loads(out)["results"]["lp"]["status"] == "infeasible"
    code, out, _ = run(capsys, "bounds", "--data", path, "--assume", "no-interaction")
    assert code == 0 and json.loads(out)["diagnostics"]["slack_used"] > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--data", "missing.json"],
        ["bounds", "--data", "x.txt"],
        ["bounds"],
        ["bounds", "--data", "a.json", "--estimand", "nope"],
        ["bounds", "--data", "a.json", "--theta", "2"],
        ["simulate", "--example", "2", "--n-obs", "-5"],
        ["frobnicate"],
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    assert main(argv) == 2


def test_theta_conflicts_with_no_interaction(capsys, dists):
    code, _, err = run(capsys, "bounds", "--data", dists("example2"), "--assume", "no-interaction", "--theta", "0.2")
    assert code == 2 and "theta" in err


def test_sensitivity_csv(capsys, dists, tmp_path):
    code, out, _ = run(capsys, "sensitivity", "--data", dists("example2"), "--grid", "0,0.5,1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta,lower,upper,status" and len(lines) == 4
    csv_path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "sensitivity", "--data", dists("example2"), "--out", str(csv_path))
    assert code == 0 and len(csv_path.read_text().splitlines()) == 22
    assert json.loads(out)["axis"] == "max interactive proportion"


def test_simulate_then_bootstrap(capsys, tmp_path):
    csv_path = tmp_path / "sim.csv"
    code, out, _ = run(capsys, "simulate", "--example", "2", "--n-obs", "200", "--n-per-arm", "50", "--out", str(csv_path))
    assert code == 0 and json.loads(out)["results"]["rows"] == 400
    code, stdout_csv, err = run(capsys, "simulate", "--example", "2", "--n-obs", "200", "--n-per-arm", "50")
    assert stdout_csv == csv_path.read_text() and json.loads(err)["seed"] == 0
    code, out, _ = run(capsys, "bootstrap", "--data", str(csv_path), "--replicates", "20", "--seed", "1")
    assert code == 0
    first = json.loads(out)["results"]
    code, out, _ = run(capsys, "bootstrap", "--data", str(csv_path), "--replicates", "20", "--seed", "1")
    assert json.loads(out)["results"] == first
    code, out, _ = run(capsys, "bounds", "--data", str(csv_path))
    assert code == 0 and json.loads(out)["diagnostics"]["rows"] == 400


def test_bootstrap_needs_csv(capsys, dists):
    assert main(["bootstrap", "--data", dists("example2")]) == 2


def test_verify_exit_code(capsys, tmp_path):
    assert main(["verify", "--scenario", "example2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] and out["reconcile"]["corrections"]
    # mono+no-interaction point-identifies EY_A1 on the no-interaction counterexample, so the full run reports a failure
    assert main(["verify"]) == 1


def test_identify(capsys, dists):
    code, out, _ = run(capsys, "identify", "--graph", "b_unconfounded", "--regime", "both", "--estimand", "ey-a",
                       "--data", dists("example1"))
    result = json.loads(out)["results"]
    assert code == 0 and result["verdict"]["estimator"] == "amce_population"
    assert result["estimate"]["ate"] == pytest.approx(-0.07616)


def test_module_entry_point(dists):
    proc = subprocess.run([sys.executable, "-m", "fbounds", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().startswith("fbounds")
