"""Command-line entry point; every subcommand writes a deterministic JSON report."""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .bounds import Estimand, lp_bounds
from .closed_form import closed_form_bounds, correction_report, is_defined, reconcile, regime_for
from .dataset import read_csv, sample_dataset, write_csv
from .identify import DATA_REGIMES, FUNCTIONALS, GRAPH_CASES, AssumptionProfile, advise, estimate
from .inference import bootstrap_bounds, empirical_distributions
from .jsonio import read_distributions
from .model import AssumptionSet
from .scenarios import SCENARIO_NAMES, builtin_scenario
from .sensitivity import parse_grid, theta_sweep
from .simplex import INFEASIBLE
from .verify import verify_all, verify_scenario

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

ASSUME = {
    "none": AssumptionSet(),
    "mono": AssumptionSet.monotone(),
    "mono-a": AssumptionSet(monotone_a=True),
    "mono-b": AssumptionSet(monotone_b=True),
    "no-interaction": AssumptionSet(no_interaction=True),
}
ESTIMAND_CHOICES = ("ey-a1", "ey-a0", "ate")


class UsageError(ValueError):
    pass


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _slack(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"slack must be 'auto' or a nonnegative number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("slack must be nonnegative")
    return value


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {value}")
    return value


def _assumptions(args) -> AssumptionSet:
    base = ASSUME[args.assume]
    theta = getattr(args, "theta", None)
    if theta is None:
        return base
    if base.no_interaction:
        raise UsageError("--theta cannot be combined with --assume no-interaction")
    return base.with_theta(theta)


def _load(path: str):
    """Return (obs, fact, dataset-or-None, diagnostics) from a JSON or CSV file."""
    p = Path(path)
    if p.suffix.lower() == ".json":
        obs, fact = read_distributions(p)
        return obs, fact, None, {}
    if p.suffix.lower() == ".csv":
        data = read_csv(p)
        emp = empirical_distributions(data)
        return emp.obs, emp.fact, data, {"counts": emp.counts_dict(), "rows": len(data)}
    raise UsageError(f"{path}: data file must end in .json (distributions) or .csv (unit records)")


def _report(args, argv: List[str], inputs: dict, **body) -> dict:
    return {
        "tool": "fbounds",
        "version": __version__,
        "command": argv,
        "inputs": inputs,
        **body,
    }


def _emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bounds(args, argv) -> int:
    obs, fact, data, diag = _load(args.data)
    assume = _assumptions(args)
    estimand = Estimand.parse(args.estimand)
    results = {}
    exit_code = EXIT_OK
    if args.method in ("lp", "both"):
        lp = lp_bounds(obs, fact, assume, estimand, args.slack)
        results["lp"] = lp.to_dict()
        diag["slack_used"] = lp.slack_used
        diag["feasible"] = lp.feasible
        if lp.status == INFEASIBLE and args.slack != "auto":
            exit_code = EXIT_INFEASIBLE
    if args.method in ("closed-form", "both"):
        results["closed_form"] = _closed_form(obs, fact, assume, estimand)
    if args.method == "both" and results["closed_form"].get("lower") is not None and results["lp"]["status"] != INFEASIBLE:
        cf, lp = results["closed_form"], results["lp"]
        results["discrepancy"] = max(abs(cf["lower"] - lp["lower"]), abs(cf["upper"] - lp["upper"]))
        results["reconcile"] = reconcile(estimand, fact, obs, assume)
    _emit(
        _report(args, argv, {args.data: _digest(Path(args.data))}, estimand=estimand.kind, assumptions=assume.label(),
                results=results, diagnostics=diag),
        args.out,
    )
    return exit_code


def _closed_form(obs, fact, assume: AssumptionSet, estimand: Estimand) -> dict:
    plain = not assume.no_interaction and assume.max_interaction is None
    if not plain or assume.monotone_a != assume.monotone_b:
        return {"lower": None, "upper": None, "note": "no closed form for this assumption set"}
    if fact is None:
        return {"lower": None, "upper": None, "note": "closed forms need factorial data"}
    regime = regime_for(obs is not None, assume.monotone_a)
    if not is_defined(regime, estimand):
        return {"lower": None, "upper": None, "note": f"no closed form for {estimand.kind} in regime {regime}"}
    res = closed_form_bounds(estimand, fact, obs, assume.monotone_a)
    return {**res.to_dict(), "regime": regime}


def cmd_sensitivity(args, argv) -> int:
    obs, fact, data, diag = _load(args.data)
    base = ASSUME[args.assume]
    if base.no_interaction:
        raise UsageError("sensitivity sweeps the interaction cap; use --assume none, mono, mono-a or mono-b")
    estimand = Estimand.parse(args.estimand)
    curve = theta_sweep(obs, fact, estimand, base, parse_grid(args.grid), args.slack)
    buf = io.StringIO()
    curve.write_csv(buf)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        report = _report(
            args, argv, {args.data: _digest(Path(args.data))},
            estimand=estimand.kind, assumptions=base.label(), axis="max interactive proportion",
            results={"curve": [dict(zip(("theta", "lower", "upper", "status"), row)) for row in curve.rows()],
                     "csv": args.out, "method": "lp"},
            diagnostics=diag,
        )
        _emit(report, None)
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_simulate(args, argv) -> int:
    name = {1: "example1", 2: "example2"}[args.example]
    scenario = builtin_scenario(name)
    data = sample_dataset(scenario.model, args.n_obs, args.n_per_arm, args.seed)
    truth = {"ey_a0": scenario.truth.ey_a0, "ey_a1": scenario.truth.ey_a1, "ate": scenario.truth.ate}
    report = _report(
        args, argv, {}, seed=args.seed, scenario=name,
        results={"rows": len(data), "n_obs": args.n_obs, "n_per_arm": args.n_per_arm, "truth": truth},
    )
    if args.out:
        write_csv(data, args.out)
        report["results"]["csv"] = args.out
        report["results"]["csv_sha256"] = _digest(Path(args.out))
        _emit(report, None)
    else:
        write_csv(data, sys.stdout)
        sys.stderr.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_bootstrap(args, argv) -> int:
    if Path(args.data).suffix.lower() != ".csv":
        raise UsageError("bootstrap needs unit records (.csv)")
    data = read_csv(args.data)
    assume = _assumptions(args)
    estimand = Estimand.parse(args.estimand)
    res = bootstrap_bounds(data, estimand, assume, args.replicates, args.alpha, args.seed)
    _emit(
        _report(args, argv, {args.data: _digest(Path(args.data))}, seed=args.seed, estimand=estimand.kind,
                assumptions=assume.label(), results=res.to_dict(),
                diagnostics={"counts": empirical_distributions(data).counts_dict(), "rows": len(data)}),
        args.out,
    )
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    checks = verify_all() if args.scenario == "all" else {args.scenario: verify_scenario(args.scenario)}
    body = {name: [c.to_dict() for c in cs] for name, cs in checks.items()}
    passed = all(c.passed for cs in checks.values() for c in cs)
    _emit(_report(args, argv, {}, results=body, passed=passed, reconcile=correction_report()), args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_identify(args, argv) -> int:
    profile = AssumptionProfile(args.graph, args.functional, args.regime)
    kind = "ATE" if args.estimand == "ate" else "EY_a"
    verdict = advise(profile, kind)
    results = {"verdict": verdict.to_dict(), "profile": profile.__dict__}
    inputs = {}
    if args.data:
        obs, fact, _, _ = _load(args.data)
        inputs[args.data] = _digest(Path(args.data))
        results["estimate"] = estimate(verdict, fact, obs)
    _emit(_report(args, argv, inputs, results=results), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbounds", description="Bounds on single-treatment effects from factorial and observational data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data_required=True):
        p.add_argument("--data", required=data_required, help="distributions (.json) or unit records (.csv)")
        p.add_argument("--estimand", choices=ESTIMAND_CHOICES, default="ate")
        p.add_argument("--assume", choices=sorted(ASSUME), default="none")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("bounds", help="sharp bounds by LP and/or closed form")
    common(p)
    p.add_argument("--theta", type=_unit_interval, help="cap on the interactive-strata mass")
    p.add_argument("--slack", type=_slack, default="auto", help="0, auto, or a fixed band")
    p.add_argument("--method", choices=("lp", "closed-form", "both"), default="lp")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sensitivity", help="bounds across a grid of interaction caps (CSV)")
    common(p)
    p.add_argument("--grid", default="0:1:0.05", help="start:stop:step or comma list")
    p.add_argument("--slack", type=_slack, default="auto")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("simulate", help="draw a dataset from a builtin example")
    p.add_argument("--example", type=int, choices=(1, 2), required=True)
    p.add_argument("--n-obs", type=int, default=1000)
    p.add_argument("--n-per-arm", type=int, default=250)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path; without it the CSV goes to stdout and the report to stderr")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bootstrap", help="percentile bootstrap for the bound endpoints")
    common(p)
    p.add_argument("--theta", type=_unit_interval)
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("verify", help="check the builtin scenarios")
    p.add_argument("--scenario", choices=SCENARIO_NAMES + ("all",), default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identify", help="identification advisor")
    p.add_argument("--graph", choices=GRAPH_CASES, default="fully_confounded")
    p.add_argument("--functional", choices=FUNCTIONALS, default="none")
    p.add_argument("--regime", choices=DATA_REGIMES, default="both")
    p.add_argument("--estimand", choices=("ey-a", "ate"), default="ate")
    p.add_argument("--data", help="optional data to evaluate the identified estimator")
    p.add_argument("--out")
    p.set_defaults(func=cmd_identify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "simulate" and (args.n_obs < 0 or args.n_per_arm < 0):
        parser.print_usage(sys.stderr)
        sys.stderr.write("fbounds: error: sample sizes must be nonnegative\n")
        return EXIT_INVALID
    if args.command == "bootstrap" and (args.replicates < 1 or not 0 < args.alpha < 1):
        sys.stderr.write("fbounds: error: --replicates must be >= 1 and --alpha in (0, 1)\n")
        return EXIT_INVALID
    try:
        return args.func(args, argv)
    except (ValueError, OSError) as exc:
        # format, invariant and missing-file errors all count as invalid input
        sys.stderr.write(f"fbounds: error: {exc}\n")
        return EXIT_INVALID

if __name__ == "__main__":
    sys.exit(main())
