"""Command-line front end.

Every subcommand writes CSV (or JSON for ``verify``) to ``--out`` or stdout.
Exit status: 0 on success, 2 on a usage, parse, or contract error, 1 when a
``verify`` suite has a failing cell.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from .cheb import check_chebyshev
from .classic import classic_bounds
from .config import MeasuredSpec, parse_config, parse_error, parse_function, parse_measure, parse_system
from .errmodel import PowerMeasure3, phi_kernel_detail
from .errors import ConfigError, HHError, InputError
from .functions import Interval, RealFunction
from .lower import lower_bound_thm3, lower_bound_thm4
from .meansys import lift_weighted_system
from .measure import default_quadrature
from .report import CSV_COLUMNS
from .residual import RESIDUAL_GRID, convexity_residual, is_omega_convex, jensen_eta, measured_eps
from .upper import upper_bound_cor6b, upper_bound_thm5, upper_bound_thm6
from .verify import run_suite

PHI_ROW_DIGITS = 12


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _report_csv(rep, x=None, y=None) -> str:
    row = rep.row("0", x, y)
    return _csv(CSV_COLUMNS, [[row[k] for k in CSV_COLUMNS]])


# ---------------------------------------------------------------- subcommands

def _check_system(a) -> int:
    sys_ = parse_system(a.system)
    rep = check_chebyshev(sys_, a.grid)
    kind, p, q = rep.first_violation if rep.first_violation else ("", None, None)
    _emit(_csv(("system", "ok", "grid_n", "min_omega0", "min_det", "violation", "at_a", "at_b"),
               [[sys_.spec, rep.ok, rep.grid_n, rep.min_omega0, rep.min_det, kind, p, q]]), a.out)
    return 0


def _residual(a) -> int:
    sys_ = parse_system(a.system)
    f = parse_function(a.f)
    if a.u is not None:
        r = convexity_residual(f, sys_, a.x, a.u, a.y)
        _emit(_csv(("x", "u", "y", "residual"), [[a.x, a.u, a.y, r]]), a.out)
        return 0
    rep = is_omega_convex(f, sys_, a.grid, Interval(a.x, a.y))
    wx, wu, wy = rep.worst
    _emit(_csv(("system", "f", "x", "y", "grid_n", "ok", "worst_x", "worst_u", "worst_y", "worst_residual"),
               [[sys_.spec, f.label, a.x, a.y, rep.grid_n, rep.ok, wx, wu, wy, rep.worst_residual]]), a.out)
    return 0


def _classic(a) -> int:
    sys_ = parse_system(a.system)
    cr = classic_bounds(parse_function(a.f), sys_, parse_function(a.rho), a.x, a.y, default_quadrature())
    c = cr.coeffs
    _emit(_csv(("x", "y", "xi", "c", "c1", "c2", "lower", "integral", "upper", "margin_lower", "margin_upper"),
               [[a.x, a.y, c.xi, c.c, c.c1, c.c2, cr.lower, cr.integral, cr.upper,
                 cr.margin_lower, cr.margin_upper]]), a.out)
    return 0


def _mean_bound(a, fn) -> int:
    sys_ = parse_system(a.system)
    f = parse_function(a.f)
    q = default_quadrature()
    ms = lift_weighted_system(sys_, parse_function(a.rho), q)
    err = parse_error(a.error)
    if isinstance(err, MeasuredSpec):
        err = measured_eps(f, sys_, err.grid, Interval(a.x, a.y), err.exact)
    rep = fn(f, ms, sys_, err, a.x, a.y, q)
    _emit(_report_csv(rep, a.x, a.y), a.out)
    return 0


def _segment_fn(a) -> tuple[RealFunction, float, float]:
    """``f`` itself on [0, 1], or its trace on ``[x, y]`` when both are given."""
    f = parse_function(a.f)
    if a.x is None and a.y is None:
        return f, 0.0, 1.0
    if a.x is None or a.y is None:
        raise InputError("give both --x and --y, or neither")
    x, y = a.x, a.y
    g = f.fn
    return RealFunction(lambda t: g((1.0 - t) * x + t * y), f"{f.label}|[{x},{y}]"), x, y


def _segment_bound(a, fn) -> int:
    g, x, y = _segment_fn(a)
    err = parse_error(a.error)
    if isinstance(err, MeasuredSpec):
        err = jensen_eta(g, err.grid, err.exact)
    rep = fn(g, parse_measure(a.measure), err, a.s, default_quadrature())
    _emit(_report_csv(rep, x, y), a.out)
    return 0


def _cor6b(a) -> int:
    g, x, y = _segment_fn(a)
    nu = parse_error(a.error)
    if not isinstance(nu, PowerMeasure3):
        raise InputError("upper-cor6b needs --error power3:[(p,q,r,c),...]")
    rep = upper_bound_cor6b(g, nu, a.s)
    _emit(_report_csv(rep, x, y), a.out)
    return 0


def _phi_table(a) -> int:
    if not a.step > 0:
        raise InputError("--step must be > 0")
    if a.to < a.from_:
        raise InputError("--to must be >= --from")
    n = int(round((a.to - a.from_) / a.step)) + 1
    rows = []
    for i in range(n):
        s = round(a.from_ + i * a.step, PHI_ROW_DIGITS)
        if s > a.to + 1e-12:
            break
        v = phi_kernel_detail(s, a.tol)
        rows.append([s, v.value, v.cutoff])
    _emit(_csv(("sigma", "phi", "cutoff"), rows), a.out)
    return 0


def _verify(a) -> int:
    spec = parse_config(a.config)
    if a.seed is not None:
        spec = replace(spec, seed=a.seed)
    rep = run_suite(spec, a.workers)
    _emit(rep.to_json(), a.out)
    return 1 if rep.failed else 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhbounds", description="Certify Hermite-Hadamard type bounds.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, help_, fn):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.set_defaults(run=fn)
        return sp

    def pair(sp, required=True):
        sp.add_argument("--x", type=float, required=required)
        sp.add_argument("--y", type=float, required=required)

    sp = add("check-system", "scan a Chebyshev system for positivity", _check_system)
    sp.add_argument("--system", required=True)
    sp.add_argument("--grid", type=int, default=257)

    sp = add("residual", "convexity residual at a triple, or worst residual on a grid", _residual)
    sp.add_argument("--system", required=True)
    sp.add_argument("--f", required=True)
    pair(sp)
    sp.add_argument("--u", type=float, default=None)
    sp.add_argument("--grid", type=int, default=RESIDUAL_GRID)

    sp = add("classic-bounds", "exact two-sided bound for a weight rho", _classic)
    sp.add_argument("--system", required=True)
    sp.add_argument("--rho", default="const:1")
    sp.add_argument("--f", required=True)
    pair(sp)

    for name, fn, help_ in (("lower-thm3", lower_bound_thm3, "lower bound over a lifted mean system"),
                            ("upper-thm5", upper_bound_thm5, "upper bound over a lifted mean system")):
        sp = add(name, help_, lambda a, fn=fn: _mean_bound(a, fn))
        sp.add_argument("--system", required=True)
        sp.add_argument("--rho", default="const:1")
        sp.add_argument("--f", required=True)
        sp.add_argument("--error", default="zero")
        pair(sp)

    for name, fn, help_ in (("lower-thm4", lower_bound_thm4, "lower bound for a probability measure"),
                            ("upper-thm6", upper_bound_thm6, "upper bound for a probability measure")):
        sp = add(name, help_, lambda a, fn=fn: _segment_bound(a, fn))
        sp.add_argument("--f", required=True, help="segment function on [0,1], or f traced on [x,y]")
        sp.add_argument("--measure", default="lebesgue")
        sp.add_argument("--error", default="zero")
        sp.add_argument("--s", type=float, default=1.0)
        pair(sp, required=False)

    sp = add("upper-cor6b", "midpoint bound with a power error measure", _cor6b)
    sp.add_argument("--f", required=True)
    sp.add_argument("--error", required=True, help="power3:[(p,q,r,c),...]")
    sp.add_argument("--s", type=float, default=1.0)
    pair(sp, required=False)

    sp = add("phi-table", "tabulate the kernel Phi", _phi_table)
    sp.add_argument("--from", dest="from_", type=float, default=0.0)
    sp.add_argument("--to", type=float, default=1.0)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("verify", "run a certification suite from a config file", _verify)
    sp.add_argument("--config", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.run(args)
    except ConfigError as exc:
        print(f"hhbounds: config error: {exc}", file=sys.stderr)
        return 2
    except (HHError, ValueError) as exc:
        print(f"hhbounds: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
