"""Command-line front end.

Three subcommands: ``report`` prints the work quantities for an instance
file, ``sweep`` scans a post-processing family and reports observational
ergotropy per grid point, ``verify`` runs the randomized audits. Exit codes:
0 success (and, for verify, zero violations), 1 audit violations found,
2 usage or validation errors. Identical invocations produce byte-identical
stdout; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audits import CLAIM_AUDITS, AuditConfig, AuditResult, run_all, run_audit
from .errors import ErgokitError, InvalidClaim, ValidationError
from .ergotropy import WorkReport, observational_ergotropy, report
from .instances import family_matrix, load_instance, parse_grid
from .measurement import computational_basis, post_process


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _pick_measurement(instance, name: str | None, path: str):
    if name is None:
        return None
    if name not in instance.measurements:
        known = ", ".join(sorted(instance.measurements)) or "none defined"
        raise ValidationError(f"measurements.{name}: not present in {path} (available: {known})")
    return instance.measurements[name]


def cmd_report(args) -> int:
    instance = load_instance(args.instance)
    m = _pick_measurement(instance, args.measurement, args.instance)
    rep = report(instance.state, instance.hamiltonian, m)
    if args.format == "json":
        text = json.dumps(rep.to_json_dict()) + "\n"
    else:
        text = WorkReport.CSV_HEADER + "\n" + rep.to_csv_row() + "\n"
    _write(text, args.output)
    return 0


def cmd_sweep(args) -> int:
    instance = load_instance(args.instance)
    base = _pick_measurement(instance, args.measurement, args.instance)
    if base is None:
        base = computational_basis(instance.dimension)
    grid = parse_grid(args.grid)
    points = []
    for value in grid:
        dmat = family_matrix(args.family, value, base.n_outcomes)
        coarse = post_process(base, dmat)
        points.append((value, observational_ergotropy(instance.state, instance.hamiltonian, coarse)))
    if args.format == "json":
        lines = [json.dumps({"parameter": v, "observational_ergotropy": r}) for v, r in points]
    else:
        lines = ["parameter,observational_ergotropy"]
        lines += [f"{repr(float(v))},{repr(float(r))}" for v, r in points]
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    if args.claim != "all" and args.claim not in CLAIM_AUDITS:
        known = ", ".join([*CLAIM_AUDITS, "all"])
        raise InvalidClaim(f"unknown claim {args.claim!r} (expected one of: {known})")
    cfg = AuditConfig(dimension=args.d, outcomes=args.n, rank=args.rank,
                      trials=args.trials, seed=args.seed, tolerance=args.tol)
    results = run_all(cfg) if args.claim == "all" else [run_audit(args.claim, cfg)]
    if args.format == "json":
        lines = [json.dumps(r.to_json_dict()) for r in results]
    else:
        lines = [AuditResult.CSV_HEADER]
        lines += [r.to_csv_row() for r in results]
    _write("\n".join(lines) + "\n", args.output)
    for r in results:
        print(f"# {r.claim}: {r.trials} trials, {r.violations} violations, {r.wall_time_s:.2f}s",
              file=sys.stderr)
    return 0 if all(r.violations == 0 for r in results) else 1


def _add_output_flags(sub, default_format: str) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default=default_format,
                     help=f"output format (default: {default_format})")
    sub.add_argument("--output", metavar="PATH", default=None,
                     help="write results to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergokit",
        description="Work extraction quantities for finite-dimensional quantum states "
                    "under coarse-grained measurements, plus randomized audits of the "
                    "underlying inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="compute work quantities for an instance file")
    p_report.add_argument("instance", help="path to a JSON instance file")
    p_report.add_argument("--measurement", metavar="NAME", default=None,
                          help="named measurement to evaluate observational ergotropy with")
    _add_output_flags(p_report, "json")
    p_report.set_defaults(func=cmd_report)

    p_sweep = sub.add_parser("sweep", help="scan a post-processing family over a parameter grid")
    p_sweep.add_argument("instance", help="path to a JSON instance file")
    p_sweep.add_argument("--family", required=True, help="post-processing family name (merge, mix)")
    p_sweep.add_argument("--grid", required=True,
                         help="parameter grid: start:stop:count or comma-separated values")
    p_sweep.add_argument("--measurement", metavar="NAME", default=None,
                         help="base measurement to coarsen (default: computational basis)")
    _add_output_flags(p_sweep, "csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run randomized audits of the core claims")
    p_verify.add_argument("claim", help="one of: " + ", ".join([*CLAIM_AUDITS, "all"]))
    p_verify.add_argument("--d", type=int, default=3, help="Hilbert space dimension (default: 3)")
    p_verify.add_argument("--n", type=int, default=4, help="coarse outcome count (default: 4)")
    p_verify.add_argument("--rank", type=int, default=None, help="state rank (default: full)")
    p_verify.add_argument("--trials", type=int, default=1000, help="trials per audit (default: 1000)")
    p_verify.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    p_verify.add_argument("--tol", type=float, default=1e-9, help="violation tolerance (default: 1e-9)")
    _add_output_flags(p_verify, "json")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ErgokitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
