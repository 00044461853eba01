"""Command-line front end: analyze, grid, verify, export.

Exit codes: 0 success, 1 violation found, 2 usage or parse error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import discrepancy as disc
from . import distribution as dist
from . import norms
from . import pointset
from . import verify
from .errors import ExdiscError, ParseError
from .rational import fmt, to_fraction

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class IoError(Exception):
    pass


# ----------------------------------------------------------------- io helpers


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_points(args) -> pointset.PointSet:
    if args.points is not None:
        items = [s for s in args.points.replace(" ", "").split(",") if s]
        return pointset.new(items)
    if args.input is None:
        raise ParseError("no point set given (path, '-' or --points)")
    return pointset.from_json(_read_text(args.input))


def _decimal(q) -> str:
    return format(float(q), ".12g")


# ----------------------------------------------------------------- analyze


def _norm_block(profile: dist.DistributionProfile, args) -> dict:
    out: dict = {}
    if args.p:
        out["lp_pow"] = {fmt(p): norms.lp_norm_pow(profile, p).to_json() for p in args.p}
        if args.q:
            out["lorentz_pow"] = {
                f"{fmt(p)},{fmt(q)}": norms.lorentz_norm_pow(profile, p, q).to_json() for p in args.p for q in args.q
            }
    if args.psi:
        out["psi"] = {s: norms.psi_norm(profile, norms.parse_psi(s), args.tol).to_json() for s in args.psi}
    return out


def cmd_analyze(args) -> int:
    ps = _load_points(args)
    scalars = {
        "star": disc.closed_form_star(ps),
        "l2_sq": disc.closed_form_l2_sq(ps),
        "extreme_star": disc.closed_form_extreme_star(ps),
        "extreme_l2_sq_triangle": disc.closed_form_extreme_l2_sq(ps, disc.Region.TRIANGLE),
        "extreme_l2_sq_square": disc.closed_form_extreme_l2_sq(ps, disc.Region.SQUARE),
    }
    pd, pdt = dist.dist_D(ps), dist.dist_Dtilde(ps)
    report = {
        "points": [fmt(x) for x in ps.points],
        "n": ps.n_points,
        "classification": pointset.classify(ps).to_json(),
        **{k: fmt(v) for k, v in scalars.items()},
        "density": dist.density_of_D(ps).to_json(),
        "profile_D": pd.to_json(),
        "profile_Dtilde": pdt.to_json(),
    }
    nd, ndt = _norm_block(pd, args), _norm_block(pdt, args)
    if nd or ndt:
        report["norms"] = {"D": nd, "Dtilde": ndt}
    if args.decimal:
        report["decimal"] = {k: _decimal(v) for k, v in scalars.items()}
    _write_text(args.output, _dumps(report))
    return EXIT_OK


# ----------------------------------------------------------------- grid


def cmd_grid(args) -> int:
    if args.n < 1:
        raise ParseError("--n must be >= 1")
    ps = pointset.centered_grid(args.n) if args.delta is None else pointset.translated_grid(args.n, args.delta)
    _write_text(args.output, ps.dumps() + "\n")
    return EXIT_OK


# ----------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    checks = list(verify.CHECKS) if args.check == "all" else [args.check]
    summary = verify.campaign(args.seed, args.trials, args.n_max, checks)
    text = _dumps(summary)
    if args.json:
        _write_text(args.json, text)
        for c in checks:
            stats = summary["checks"][c]
            print(f"{c}: " + ", ".join(f"{k}={v}" for k, v in sorted(stats.items())))
    else:
        sys.stdout.write(text)
    bad = summary["violations"] or summary["equality_mismatches"]
    return EXIT_VIOLATION if bad else EXIT_OK


# ----------------------------------------------------------------- export


def export_rows(ps: pointset.PointSet, which: str = "D", refine: int = 4) -> List[tuple]:
    """(alpha, F(alpha), F_grid(alpha), F_grid - F) at every breakpoint, refined uniformly."""
    if which == "D":
        prof, grid = dist.dist_D(ps), dist.grid_profile_D()
    else:
        prof, grid = dist.dist_Dtilde(ps), dist.grid_profile_Dtilde()
    knots = sorted({Fraction(0)} | set(prof.breakpoints) | set(grid.breakpoints))
    alphas = [knots[0]]
    for a, b in zip(knots, knots[1:]):
        alphas += [a + (b - a) * Fraction(k, refine) for k in range(1, refine + 1)]
    return [(a, prof(a), grid(a), grid(a) - prof(a)) for a in alphas]


def cmd_export(args) -> int:
    if args.refine < 1:
        raise ParseError("--refine must be >= 1")
    rows = export_rows(_load_points(args), args.which, args.refine)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["alpha", "F", "F_grid", "gap"]
    if args.decimal:
        header += [h + "_decimal" for h in header]
    w.writerow(header)
    for row in rows:
        out = [fmt(v) for v in row]
        if args.decimal:
            out += [_decimal(v) for v in row]
        w.writerow(out)
    _write_text(args.output, buf.getvalue())
    return EXIT_OK


# ----------------------------------------------------------------- parser


def _fraction_arg(s: str) -> Fraction:
    try:
        return to_fraction(s)
    except ExdiscError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {s}") from exc
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _add_input(sp) -> None:
    sp.add_argument("input", nargs="?", help="point-set JSON file, or '-' for stdin")
    sp.add_argument("--points", help="inline comma-separated points, e.g. '0,3/4'")
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp.add_argument("--decimal", action="store_true", help="add rounded decimal values next to exact ones")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="exdisc", description="Exact discrepancy distributions and norms.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="closed forms, profiles and norms of one point set")
    _add_input(sp)
    sp.add_argument("--p", type=_fraction_arg, action="append", help="L_p exponent (repeatable)")
    sp.add_argument("--q", type=_fraction_arg, action="append", help="Lorentz second exponent (repeatable, needs --p)")
    sp.add_argument("--psi", action="append", help="psi spec: power:p, a preset name, poly:c0,c1,... or JSON")
    sp.add_argument("--tol", type=_positive_float, default=1e-12, help="psi-norm tolerance")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("grid", help="write the centered or a translated grid")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=_fraction_arg, help="translation in [0, 1/N)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("verify", help="random exact checks of the inequalities")
    sp.add_argument("--check", choices=list(verify.CHECKS) + ["all"], default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", default="0")
    sp.add_argument("--n-max", type=int, default=30)
    sp.add_argument("--json", help="write the JSON summary here instead of stdout")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export", help="distribution profile as CSV")
    _add_input(sp)
    sp.add_argument("--which", choices=["D", "Dtilde"], default="D")
    sp.add_argument("--refine", type=int, default=4, help="uniform subdivisions between breakpoints")
    sp.set_defaults(func=cmd_export)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except IoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ExdiscError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
