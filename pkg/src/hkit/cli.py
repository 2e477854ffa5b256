"""Command-line front end: ``hkit verify|classify|factorize|report``."""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema
import numpy as np

from .bargmann import hardy_classify
from .errors import HkitError, InvalidArgument, InvalidConfig, ParseError
from .factorization import factorize_analytic, factorize_entire
from .grids import gauss_hermite_grid
from .io import ingest_function, write_function
from .reports import (
    TRACEABILITY,
    VerificationReport,
    _jsonable,
    emit_report,
    validate_report,
)
from .reports import Check
from .suites import SUITES, load_config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_SUITE_CHOICES = list(SUITES) + ["all", "bounds"]


def _common(p):
    p.add_argument("--config", help="JSON config file (default: $HKIT_CONFIG)")
    p.add_argument("--n", type=int, help="configuration-space dimension (1 or 2)")
    p.add_argument("--nodes", type=int, help="Gauss-Hermite order of the function grid")
    p.add_argument("--trunc", type=int, help="Hermite truncation N for membership sums")
    p.add_argument("--t", type=float, nargs="+", help="time parameter(s)")
    p.add_argument("--tol", type=float, help="generic tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="hkit", description="Hermite and Weyl transform verification kit")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=_SUITE_CHOICES)
    _common(v)
    v.add_argument("--theorem", choices=["3.9", "4.7"], help="bound selector for `verify bounds`")
    v.add_argument("--N", type=int, help="coefficient range of the bound checks")
    v.add_argument("--trials", type=int)
    v.add_argument("--y", type=float, help="Gutzmer point, imaginary x-part")
    v.add_argument("--v", type=float, help="Gutzmer point, imaginary u-part")
    v.add_argument("--band", type=float, help="Hardy boundary band for |ab - 1|")

    c = sub.add_parser("classify", help="Hardy trichotomy of a sampled function")
    c.add_argument("--input", required=True)
    c.add_argument("--fourier", help="sampled Fourier transform (computed when omitted)")
    c.add_argument("--band", type=float)
    _common(c)

    f = sub.add_parser("factorize", help="constructive factorization phi = W(h) f")
    f.add_argument("--phi", required=True, help="target (or phi_0 with --entire)")
    f.add_argument("--f", required=True, dest="f_path")
    f.add_argument("--entire", action="store_true", help="treat --phi as phi_0 with target exp(-tH) phi_0")
    f.add_argument("--h-output", default="h.csv", help="phase-space CSV for the kernel h")
    _common(f)

    r = sub.add_parser("report", help="convert a saved JSON report or print the traceability matrix")
    r.add_argument("--input", help="saved JSON report")
    r.add_argument("--output", "-o")
    r.add_argument("--format", choices=["json", "csv", "markdown"], default="markdown")
    return parser


def _overrides(args):
    keys = ("n", "nodes", "trunc", "t", "tol", "seed", "trials", "N", "y", "v", "band")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verify(args):
    cfg = load_config(args.config, _overrides(args))
    name = args.suite
    if name == "bounds":
        if args.theorem is None:
            raise InvalidConfig("`verify bounds` needs --theorem 3.9 or 4.7")
        name = f"bounds-{args.theorem}"
    elif args.theorem is not None:
        raise InvalidConfig("--theorem applies to `verify bounds` only")
    report = run_suite(name, cfg)
    text = emit_report(report, args.format, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _function_grid(cfg):
    return gauss_hermite_grid(cfg.grid_nodes, cfg.n)


def _classify(args):
    cfg = load_config(args.config, _overrides(args))
    grid = _function_grid(cfg)
    f = ingest_function(args.input, space="function", n=cfg.n, target=grid)
    fhat = None
    if args.fourier:
        fhat = ingest_function(args.fourier, space="function", n=cfg.n, target=grid)
    res = hardy_classify(f, fhat, band=cfg.band)
    payload = {"a": res.a, "b": res.b, "ab": res.ab, "ab_stderr": res.ab_stderr,
               "verdict": res.verdict, "diagnostics": res.diagnostics}
    _write(json.dumps(_jsonable(payload), indent=2) + "\n", args.output)
    return EXIT_OK


def _factorize(args):
    cfg = load_config(args.config, _overrides(args))
    grid = _function_grid(cfg)
    phi = ingest_function(args.phi, space="function", n=cfg.n, target=grid)
    f = ingest_function(args.f_path, space="function", n=cfg.n, target=grid)
    t = cfg.t[-1]
    if args.entire:
        h, rep = factorize_entire(phi, t, f, tol=cfg.tol)
    else:
        h, rep = factorize_analytic(phi, f, t, tol=cfg.tol)
    write_function(h, args.h_output, fmt="csv")
    rep.config = {**rep.config, "h_output": args.h_output, "t": t}
    text = emit_report(rep, args.format, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _report(args):
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
        try:
            validate_report(data)
        except jsonschema.ValidationError as exc:
            raise ParseError(f"report does not match the schema: {exc.message}") from None
        checks = [Check(c["name"], _num(c["lhs"]), _num(c["rhs"]), _num(c["error"]),
                        _num(c["tolerance"]), c["pass"], c.get("ref", ""), c.get("status", ""),
                        c.get("details", {})) for c in data["checks"]]
        report = VerificationReport(data["suite"], checks, data.get("config", {}))
    else:
        report = VerificationReport("traceability", [])
    _write(emit_report(report, args.format), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _num(x):
    return np.nan if x is None else float(x)


def main(argv=None):
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    handlers = {"verify": _verify, "classify": _classify, "factorize": _factorize, "report": _report}
    try:
        return handlers[args.command](args)
    except (HkitError, InvalidArgument, OSError, json.JSONDecodeError) as exc:
        kind = type(exc).__name__
        print(f"hkit: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["main", "build_parser", "TRACEABILITY"]
