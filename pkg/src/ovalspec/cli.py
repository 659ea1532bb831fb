"""Command-line front end: eval | critical | verify | search | mkcurve.

Exit codes are a stable contract:

  0  success
  2  invalid input (curve file, config, unknown flag, unwritable path)
  3  curve rejected as non-convex
  4  eigenvalue solve failed to converge
  5  at least one verified inequality failed
  7  a sub-1 candidate survived quarantine re-verification (search)

stdout carries one value per line in a fixed order, 9 decimals; JSON output
keeps full double precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .curve import (
    curve_from_json,
    curve_to_json,
    embed,
    split_fg,
    wrap_angle,
)
from .spectral import Scheme, converge_lambda
from .analysis import (
    critical_angles,
    full_report,
    max_circular_gap,
    theorem2_applicable,
)
from .search import SearchConfig, frontier_scan, random_curve
from .errors import (
    BudgetExceeded,
    NoConvergence,
    NodalGroundState,
    RejectBadIndex,
    RejectDuplicateIndex,
    RejectNonConvex,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NONCONVEX = 3
EXIT_NO_CONVERGENCE = 4
EXIT_VERIFY_FAILED = 5
EXIT_CANDIDATE = 7

_SCHEMES = {"cd2": Scheme.CENTRAL_DIFFERENCE_2, "collocation": Scheme.FOURIER_COLLOCATION}


def _err(msg: str) -> None:
    print(f"ovalspec: {msg}", file=sys.stderr)


def _read_curve(path: str):
    """Load a curve from a file path or stdin ('-'); raises package errors."""
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    return curve_from_json(text)


def _load_curve_or_exit(path: str):
    try:
        return _read_curve(path), EXIT_OK
    except RejectNonConvex as exc:
        _err(f"non-convex curve: {exc}")
        return None, EXIT_NONCONVEX
    except (OSError, ValueError, RejectBadIndex, RejectDuplicateIndex) as exc:
        _err(f"cannot read curve file {path!r}: {exc}")
        return None, EXIT_BAD_INPUT


def cmd_eval(args) -> int:
    spec, code = _load_curve_or_exit(args.curve_file)
    if spec is None:
        return code
    try:
        result = converge_lambda(spec, args.tol, _SCHEMES[args.scheme])
    except (NoConvergence, NodalGroundState, BudgetExceeded) as exc:
        _err(f"eigenvalue solve failed: {exc}")
        return EXIT_NO_CONVERGENCE
    print(f"{result.best:.9f}")
    if args.emit_eigenfunction:
        geom = embed(spec, result.N)
        split = split_fg(spec)
        t = wrap_angle(geom.t_of_s)
        fv, gv = split.f(t), split.g(t)
        try:
            with open(args.emit_eigenfunction, "w", encoding="utf-8") as fh:
                fh.write("s,R,kappa,x,y,f,g\n")
                for row in zip(
                    geom.s_grid, result.R, geom.kappa, geom.xy[:, 0], geom.xy[:, 1], fv, gv
                ):
                    fh.write(",".join(format(v, ".17g") for v in row) + "\n")
        except OSError as exc:
            _err(f"cannot write CSV: {exc}")
            return EXIT_BAD_INPUT
    return EXIT_OK


def cmd_critical(args) -> int:
    spec, code = _load_curve_or_exit(args.curve_file)
    if spec is None:
        return code
    cas = critical_angles(split_fg(spec))
    if cas.f_identically_zero:
        print("f==0: all angles critical")
        gap = 0.0
    else:
        for ang in cas.angles:
            print(f"{ang:.12f}")
        gap = max_circular_gap(cas)
    yes = "yes" if theorem2_applicable(cas) else "no"
    print(f"gap={gap:.9f} theorem2={yes}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, code = _load_curve_or_exit(args.curve_file)
    if spec is None:
        return code
    try:
        report = full_report(spec)
    except (NoConvergence, NodalGroundState, BudgetExceeded) as exc:
        _err(f"eigenvalue solve failed: {exc}")
        return EXIT_NO_CONVERGENCE
    print(f"lambda             {report.lambda_computed:.9f}")
    print(f"lambda_lower_bound {report.lambda_lower_bound:.9f}")
    print(f"alpha_star         {report.alpha_star:.9f}")
    print(f"max_gap            {report.max_gap:.9f}")
    print(f"theorem2           {'yes' if report.theorem2_applicable else 'no'}")
    header = f"{'inequality':34s} {'lhs':>16s} {'rhs':>16s} {'margin':>16s} status"
    print(header)
    for r in report.records:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:34s} {r.lhs:16.9e} {r.rhs:16.9e} {r.margin:16.9e} {status}")
    print(f"overall            {'pass' if report.passed else 'FAIL'}")
    if args.json:
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                json.dump(report.to_json_dict(), fh, indent=1)
                fh.write("\n")
        except OSError as exc:
            _err(f"cannot write JSON report: {exc}")
            return EXIT_BAD_INPUT
    if not report.passed:
        for r in report.failed_records():
            _err(
                f"FAILED {r.name}: lhs={r.lhs!r} rhs={r.rhs!r} margin={r.margin!r} "
                f"slack={r.slack!r} ({r.description})"
            )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError("config must be a JSON object")
        count = int(doc.pop("count", 1)) if args.count is None else args.count
        config = SearchConfig.from_json_dict(doc)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        _err(f"bad search config: {exc}")
        return EXIT_BAD_INPUT
    summary, records = frontier_scan(
        config,
        count,
        records_path=None if args.records == "-" else args.records,
        summary_path=None if args.summary == "-" else args.summary,
        candidates_dir=args.candidates_dir,
    )
    if args.records == "-":
        for r in records:
            print(json.dumps(r.to_json_dict()))
    if args.summary == "-":
        print(json.dumps(summary))
    if summary["quarantine_verified"] > 0:
        _err("a sub-1 candidate survived re-verification; see the candidates directory")
        return EXIT_CANDIDATE
    return EXIT_OK


def cmd_mkcurve(args) -> int:
    spec = random_curve(args.seed, args.max_n, args.floor)
    text = curve_to_json(spec)
    if args.out == "-":
        print(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        _err(f"cannot write {args.out!r}: {exc}")
        return EXIT_BAD_INPUT
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ovalspec",
        description="Ground-state energy of -d2/ds2 + kappa^2 on closed convex "
        "curves: evaluation, critical angles, bound verification, and "
        "conjecture search.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="print the ground-state energy of a curve")
    pe.add_argument("curve_file", help="curve JSON file, or - for stdin")
    pe.add_argument("--tol", type=float, default=1e-8, help="convergence tolerance")
    pe.add_argument("--scheme", choices=sorted(_SCHEMES), default="cd2")
    pe.add_argument(
        "--emit-eigenfunction",
        metavar="CSV",
        default=None,
        help="write s,R,kappa,x,y,f,g samples to this CSV file",
    )
    pe.set_defaults(func=cmd_eval)

    pc = sub.add_parser("critical", help="print critical angles and the gap verdict")
    pc.add_argument("curve_file")
    pc.set_defaults(func=cmd_critical)

    pv = sub.add_parser("verify", help="verify every inequality for a curve")
    pv.add_argument("curve_file")
    pv.add_argument("--json", metavar="PATH", default=None, help="also write the report as JSON")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("search", help="minimize lambda over curve space")
    ps.add_argument("--config", required=True, help="SearchConfig JSON file")
    ps.add_argument("--count", type=int, default=None, help="independent runs (overrides config)")
    ps.add_argument("--records", default="-", help="JSON-lines output path, - for stdout")
    ps.add_argument("--summary", default="-", help="summary JSON path, - for stdout")
    ps.add_argument("--candidates-dir", default="candidates")
    ps.set_defaults(func=cmd_search)

    pm = sub.add_parser("mkcurve", help="write a random admissible curve")
    pm.add_argument("--seed", type=int, required=True)
    pm.add_argument("--max-n", type=int, default=7, dest="max_n")
    pm.add_argument("--floor", type=float, default=0.05)
    pm.add_argument("--out", default="-")
    pm.set_defaults(func=cmd_mkcurve)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
