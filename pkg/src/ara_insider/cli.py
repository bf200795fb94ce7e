"""Command-line front end.

Exit status: 0 success, 1 validation or usage failure, 2 runtime error
(including unreadable files).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .model import Issue, ScenarioError, check
from .report import psi_report, solve
from .scenario_io import bundled, load, load_warnings, read_psi_table, write_report
from .uncertainty import model_average

DEFAULT_SAMPLES = 10_000


class Usage(Exception):
    """Bad input that should exit with status 1."""


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.is_file():
        return p
    b = bundled(path)
    if b is not None:
        return b
    raise FileNotFoundError(f"no such file: {path}")


def _read(path: str) -> str:
    return _resolve(path).read_text(encoding="utf-8")


def _workers(arg):
    if arg is not None:
        return arg
    return os.cpu_count() or 1


def cmd_validate(args) -> int:
    text = _read(args.path)
    try:
        scenario = load(text, lenient=args.lenient)
    except ScenarioError as exc:
        for issue in exc.issues:
            print(issue)
        return 1
    findings = load_warnings(scenario) + [i for i in check(scenario) if i.level == "warning"]
    for issue in dict.fromkeys(findings):
        print(issue)
    print(f"ok: {args.path} is a valid {scenario.model} scenario")
    return 0


def _load_for_run(args):
    try:
        return load(_read(args.path), lenient=args.lenient)
    except ScenarioError as exc:
        raise Usage("\n".join(str(i) for i in exc.issues if i.level == "error")) from None


def cmd_solve(args) -> int:
    scenario = _load_for_run(args)
    try:
        report = solve(scenario, predict=args.predict, n=args.samples or scenario.mc.n or DEFAULT_SAMPLES,
                       seed=args.seed, workers=_workers(args.workers))
    except ValueError as exc:
        raise Usage(str(exc)) from None
    sys.stdout.write(write_report(report, args.format, with_se=not args.no_se))
    return 0


def cmd_predict(args) -> int:
    args.predict = "ara"
    scenario = _load_for_run(args)
    if scenario.attacker is None:
        raise Usage("scenario has no attacker block")
    return cmd_solve(args)


def _priors(text: str, k: int):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise Usage(f"--priors must be comma-separated numbers, got {text!r}") from None
    if len(vals) != k:
        raise Usage(f"{len(vals)} priors given for {k} reports")
    if any(v < 0 or v > 1 for v in vals) or abs(sum(vals) - 1.0) > 1e-9:
        raise Usage(f"priors must be probabilities summing to 1, got {vals}")
    return vals


def cmd_model_average(args) -> int:
    tables = {}
    for i, path in enumerate(args.paths):
        try:
            model, table = read_psi_table(_read(path))
        except ValueError as exc:
            raise Usage(f"{path}: {exc}") from None
        key = model if model not in tables else Path(path).stem
        if key in tables:
            key = f"{key}#{i}"
        tables[key] = table
    prior = dict(zip(tables, _priors(args.priors, len(tables))))
    try:
        mixed, _ = model_average(tables, prior)
    except ValueError as exc:
        raise Usage(str(exc)) from None
    meta = {f"prior[{m}]": f"{p:g}" for m, p in prior.items()}
    sys.stdout.write(write_report(psi_report("average", mixed, "", meta), args.format, with_se=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ara-insider",
                                 description="Adversarial risk analysis for insider-threat games.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario document")
    p.add_argument("path")
    p.add_argument("--lenient", action="store_true", help="unknown keys warn instead of failing")
    p.set_defaults(func=cmd_validate)

    for name, func, helptext in (("solve", cmd_solve, "solve for the optimal defenses"),
                                 ("predict", cmd_predict, "simulate the attacker and solve")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("path")
        if name == "solve":
            p.add_argument("--predict", choices=["direct", "ara"], default=None,
                           help="attack distribution source (default: direct if declared)")
        p.add_argument("--samples", type=int, default=None,
                       help=f"Monte Carlo samples (default: mc.n, else {DEFAULT_SAMPLES})")
        p.add_argument("--seed", type=int, default=None, help="overrides mc.seed")
        p.add_argument("--format", choices=["csv", "markdown"], default="csv")
        p.add_argument("--no-se", action="store_true", help="omit standard errors")
        p.add_argument("--workers", type=int, default=None, help="worker processes (capped by ARA_WORKERS)")
        p.add_argument("--lenient", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("model-average", help="mix psi tables from several reports")
    p.add_argument("paths", nargs="+", help="CSV reports written by 'solve'")
    p.add_argument("--priors", required=True, help="comma-separated prior, one per report")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.set_defaults(func=cmd_model_average)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
