"""Command-line front end: collar tables, lemma verification suites, pinch runs.

Exit codes: 0 = all checks passed, 1 = a verification check failed,
2 = usage or input error.  Reports are deterministic for a fixed
configuration; structured output is JSON, sweep series are CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .collar import (
    CollarParams,
    collar_area,
    conformal_factor,
    dist_to_boundary,
    inj_bounds,
    injectivity_radius,
    thin_part_area,
)
from .errors import DomainError, UnsupportedError
from .pinching import CurveReport, PinchSchedule, curve_report, default_times
from .report import DEFAULT_TOLERANCES, RunConfig
from .suites import LEMMA_SUITES, SUITE_SUMMARIES

_PINCH_COLUMNS = {
    "t": "sample time in [0, T)",
    "ell": "core geodesic length ell(t)",
    "wp_speed": "|ell'(t)| times the L2 speed density of the projected variation",
    "L": "remaining length L(t) = integral of wp_speed over [t, T); may be inf",
    "S": "sup over the d-window of |inj^(1/2) - limit^(1/2)|",
    "S_over_L": "ratio S(t)/L(t) (0 when L = 0)",
    "d_delta": "boundary-gauge depth of the delta-thick set at time t",
}


def _epilog():
    cols = "\n".join(f"    {k:<9} {v}" for k, v in _PINCH_COLUMNS.items())
    tols = ", ".join(sorted(DEFAULT_TOLERANCES))
    return (
        "pinch CSV columns (all documented, none hidden):\n"
        f"{cols}\n\n"
        f"tolerance names for --tol NAME=VALUE: {tols}\n"
        "environment: PINCHLAB_THREADS caps the worker count for sweeps (default 1)\n"
    )


def _add_config_flags(p):
    p.add_argument("--ell-min", type=float, default=None, help="sweep lower bound")
    p.add_argument("--ell-max", type=float, default=None, help="sweep upper bound")
    p.add_argument("--samples", type=int, default=None, help="sweep sample count")
    p.add_argument("--grid", type=int, default=None, help="verification grid size")
    p.add_argument("--time-grid", type=int, default=None, help="time sample count")
    p.add_argument("--schedule", default=None,
                   help="schedule JSON path or inline spec like power:p=3,ell0=1,ellT=0,T=1")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override a named tolerance (repeatable)")
    p.add_argument("--out", default=None, metavar="DIR", help="write report files to DIR")


def _config_from_args(args) -> RunConfig:
    tols = {}
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            tols[name] = float(value)
        except ValueError as exc:
            raise DomainError(f"--tol value for {name!r} is not a number: {value!r}") from exc
    kw = {}
    if args.ell_min is not None:
        kw["ell_min"] = args.ell_min
    if args.ell_max is not None:
        kw["ell_max"] = args.ell_max
    if args.samples is not None:
        kw["ell_samples"] = args.samples
    if args.grid is not None:
        kw["grid"] = args.grid
    if getattr(args, "time_grid", None) is not None:
        kw["time_grid"] = args.time_grid
    if args.schedule is not None:
        kw["schedule_spec"] = args.schedule
    if args.out is not None:
        kw["out_dir"] = args.out
    return RunConfig(tolerances=tols, **kw)


def _collar_record(ell: float, grid: int) -> dict:
    c = CollarParams(ell)
    s = c.standard_grid(grid)
    d = dist_to_boundary(c, s)
    lo, hi = inj_bounds(d)
    return {
        "ell": c.ell,
        "half_width": c.half_width,
        "u_star": c.u_star,
        "rho_core": c.rho_core,
        "rho_boundary": c.rho_core * math.cosh(c.tau_max),
        "d_core": c.tau_max,
        "inj_core": injectivity_radius(c, 0.0),
        "inj_boundary": c.inj_boundary,
        "area_total": collar_area(c, -c.half_width, c.half_width),
        "thin_area_over_threshold": thin_part_area(c, math.asinh(1.0)) / math.asinh(1.0),
        "profile": {
            "s": list(s),
            "rho": list(conformal_factor(c, s)),
            "d": list(d),
            "inj": list(injectivity_radius(c, s)),
            "inj_lower_bound": list(lo),
            "inj_upper_bound": list(hi),
        },
    }


def cmd_collar(args) -> int:
    rec = _collar_record(args.ell, args.grid if args.grid else 17)
    if args.json:
        sys.stdout.write(json.dumps(rec, sort_keys=True, indent=2) + "\n")
    else:
        print(f"collar  ell = {rec['ell']:.12g}")
        for key in (
            "half_width", "u_star", "rho_core", "rho_boundary", "d_core",
            "inj_core", "inj_boundary", "area_total", "thin_area_over_threshold",
        ):
            print(f"  {key:<26} {rec[key]:.12g}")
        print(f"  profile ({len(rec['profile']['s'])} points)")
        print(f"  {'s':>12} {'rho':>12} {'d':>12} {'inj':>12} {'inj_lo':>12} {'inj_hi':>12}")
        prof = rec["profile"]
        for i in range(len(prof["s"])):
            print(
                f"  {prof['s'][i]:>12.6g} {prof['rho'][i]:>12.6g} {prof['d'][i]:>12.6g}"
                f" {prof['inj'][i]:>12.6g} {prof['inj_lower_bound'][i]:>12.6g}"
                f" {prof['inj_upper_bound'][i]:>12.6g}"
            )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "collar.json").write_text(json.dumps(rec, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    if args.lemma not in LEMMA_SUITES:
        print(
            f"unknown lemma id {args.lemma!r}; valid ids: {', '.join(sorted(LEMMA_SUITES))}",
            file=sys.stderr,
        )
        return 2
    config = _config_from_args(args)
    report = LEMMA_SUITES[args.lemma](config)
    payload = report.dumps()
    sys.stdout.write(payload)
    for rec in report.checks:
        status = "pass" if rec.passed else "FAIL"
        print(f"[{status}] {report.suite}: {rec.check_id}", file=sys.stderr)
    if config.out_dir:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"verify_{args.lemma.replace('.', '_')}.json").write_text(payload)
    return 0 if report.passed else 1


def _write_pinch_csv(fh, rep: CurveReport):
    writer = csv.writer(fh)
    writer.writerow(CurveReport.COLUMNS)
    for row in rep.rows():
        writer.writerow(["inf" if isinstance(v, float) and math.isinf(v) else repr(v) for v in row])


def cmd_pinch(args) -> int:
    sched = PinchSchedule.from_spec(args.schedule_arg)
    config = _config_from_args(args)
    times = default_times(sched, config.time_grid)
    rep = curve_report(sched, times, delta=config.delta, d_max=config.d_max)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "pinch.csv", "w", newline="") as fh:
            _write_pinch_csv(fh, rep)
        summary = {
            "schedule": sched.to_json(),
            "k0_unif": rep.k0_unif if math.isfinite(rep.k0_unif) else "nan",
            "L0": rep.lengths[0] if math.isfinite(rep.lengths[0]) else "inf",
            "columns": list(CurveReport.COLUMNS),
        }
        (out / "pinch.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        _write_pinch_csv(sys.stdout, rep)
    if not np.all(np.isfinite(rep.lengths)):
        print("warning: schedule has infinite length; convergence estimates do not apply",
              file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchlab",
        description=(
            "Explicit hyperbolic collar geometry and verification of pinching "
            "collar-metric families."
        ),
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_collar = sub.add_parser(
        "collar", help="print the closed-form geometry of one collar",
        epilog=_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_collar.add_argument("--ell", type=float, required=True, help="core geodesic length")
    p_collar.add_argument("--grid", type=int, default=None, help="profile sample count")
    p_collar.add_argument("--json", action="store_true", help="emit a JSON record")
    p_collar.add_argument("--out", default=None, metavar="DIR")
    p_collar.set_defaults(fn=cmd_collar)

    p_verify = sub.add_parser(
        "verify", help="run a verification suite by lemma id",
        epilog="suites:\n" + "\n".join(
            f"    {k:<6} {v}" for k, v in sorted(SUITE_SUMMARIES.items())
        ) + "\n\n" + _epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_verify.add_argument("lemma", help=f"one of {', '.join(sorted(LEMMA_SUITES))}")
    _add_config_flags(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_pinch = sub.add_parser(
        "pinch", help="run a pinching schedule and emit per-time CSV",
        epilog=_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_pinch.add_argument("schedule_arg", metavar="SCHEDULE",
                         help="schedule JSON path or inline spec (power:p=3,...)")
    _add_config_flags(p_pinch)
    p_pinch.set_defaults(fn=cmd_pinch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize our exit path
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except json.JSONDecodeError as exc:
        print(f"malformed JSON: line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    except (DomainError, UnsupportedError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
