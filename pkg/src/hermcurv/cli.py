"""Command-line front end: ``hermcurv construct | verify | table | plot``.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from pathlib import Path

import numpy as np

from . import frame, hirzebruch, ruled
from .errors import DomainError, HermcurvError, MetricFileError
from .metricfile import KINDS, PROFILE_KINDS, MetricFile
from .numerics import differentiate
from .svg import line_plot

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    """Flags are individually valid but inconsistent."""


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# construct


def _build(args) -> MetricFile:
    kind = args.kind
    if kind in PROFILE_KINDS:
        if args.n_grid < 64:
            raise UsageError("--n-grid must be at least 64")
        if kind == "chern":
            scale = args.phi1 if args.phi1 is not None else 1.0
        else:
            scale = args.phi0 if args.phi0 is not None else 1.0
        if scale <= 0:
            raise UsageError("--phi0/--phi1 must be positive")
        sol = hirzebruch.solve(kind, args.m, scale)
        return MetricFile.from_profile(sol, hirzebruch.build_profile(sol, args.n_grid))
    if kind == "ruled-zero":
        if args.b is not None:
            sol = ruled.solve_zero_chern(args.b)
        elif args.genus is not None:
            b = ruled.admissible_b_for_degree(args.genus, args.m)
            sol = dataclasses.replace(ruled.solve_zero_chern(b), genus=args.genus, m=args.m)
        else:
            raise UsageError("ruled-zero needs --b or --genus (with --m)")
        return MetricFile.from_admissible(kind, sol)
    if args.genus is None or args.b is None:
        raise UsageError("ruled-numeric needs --genus, --m and --b")
    sol = ruled.solve_x_for_genus(args.genus, args.m, args.b)
    return MetricFile.from_admissible(kind, sol)


def cmd_construct(args) -> int:
    if args.m < 1:
        return _fail(EXIT_INVALID, "--m must be a positive integer")
    try:
        mf = _build(args)
    except (UsageError, DomainError) as exc:
        return _fail(EXIT_INVALID, str(exc))
    except HermcurvError as exc:
        return _fail(EXIT_SOLVER, str(exc))
    _write_text(args.out, mf.to_json())
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _profile_checks(mf: MetricFile, tol: float):
    p = mf.profile()
    sol = mf.solution()
    t = p.interior
    defining = np.asarray(hirzebruch.defining_scalar(p, mf.kind, t))
    constancy = np.abs(defining - sol.lam) / abs(sol.lam)
    boundary = hirzebruch.boundary_residuals(p, sol.m)
    # stored derivatives must agree with the stored values
    consistency = max(
        float(np.max(np.abs(differentiate(s, 1).values - d.values)) / np.max(np.abs(d.values)))
        for s, d in ((p.f, p.f1), (p.h, p.h1)))
    regenerated = mf.regenerate()
    regen = max(float(np.max(np.abs(regenerated.arrays[k] - mf.arrays[k]))
                      / max(1.0, float(np.max(np.abs(mf.arrays[k])))))
                for k in ("grid_t", "f", "h"))
    checks = {
        "constancy": (float(constancy.max()), tol),
        "boundary": (max(boundary.values()), 1e-4),
        "lambda_positive": (0.0 if sol.lam > 0 else 1.0, 0.0),
        "jet_consistency": (consistency, tol),
        "regeneration": (regen, 1e-9),
    }
    rows = [(float(tk), float(a), float(b), float(c), float(d), float(e), max(boundary.values()))
            for tk, a, b, c, d, e in zip(t, frame.chern_scalar(p, t), frame.third_scalar(p, t),
                                         frame.riemannian_scalar(p, t), defining, constancy)]
    header = ["t", "s_chern", "s_third", "s_riemann", "defining", "constancy_residual",
              "boundary_residual"]
    return checks, header, rows


def _ruled_checks(mf: MetricFile, tol: float):
    sol = mf.admissible()
    z = mf.arrays["grid_z"]
    sc = np.asarray(ruled.conformal_chern(sol, z))
    other = np.asarray(ruled.conformal_chern_from_laplacian(sol, z))
    if mf.kind == "ruled-zero":
        constancy = np.abs(sc)
        const_tol = 1e-10
    else:
        constancy = np.abs(sc - sol.sC_tilde) / max(1.0, abs(sol.sC_tilde))
        const_tol = tol
    boundary = float(np.max(np.abs(sol.boundary_residuals())))
    stored = float(np.max(np.abs(sol.F(z) - mf.arrays["F"])))
    checks = {
        "constancy": (float(constancy.max()), const_tol),
        "two_route": (float(np.max(np.abs(sc - other))), 1e-9),
        "boundary": (boundary, 1e-9),
        "F_positive": (0.0 if ruled.check_positivity_F(sol) else 1.0, 0.0),
        "stored_F": (stored, 1e-9),
    }
    sg = ruled.admissible_scalar(sol, z)
    rows = [(float(a), float(b), float(c), float(d), float(e), boundary)
            for a, b, c, d, e in zip(z, mf.arrays["F"], sg, sc, constancy)]
    header = ["z", "F", "s_riemann", "conformal_chern", "constancy_residual", "boundary_residual"]
    return checks, header, rows


def cmd_verify(args) -> int:
    try:
        mf = MetricFile.read(args.input)
        checker = _profile_checks if mf.kind in PROFILE_KINDS else _ruled_checks
        checks, header, rows = checker(mf, args.tol)
    except (MetricFileError, DomainError) as exc:
        return _fail(EXIT_INVALID, f"malformed metric file: {exc}")
    except HermcurvError as exc:
        return _fail(EXIT_VERIFY, f"verification could not complete: {exc}")
    if args.report:
        _write_text(args.report, _csv_text(header, rows))
    failed = []
    for name, (value, limit) in checks.items():
        ok = value <= limit
        print(f"{'PASS' if ok else 'FAIL'} {name} {value:.3e} (limit {limit:.1e})")
        if not ok:
            failed.append(name)
    if failed:
        return _fail(EXIT_VERIFY, "checks failed: " + ", ".join(failed))
    return EXIT_OK


# ---------------------------------------------------------------------------
# table


TABLE_HEADER = ["genus", "m", "s_sigma", "b", "x", "c1", "c2", "sC_tilde", "F_positive"]


def cmd_table(args) -> int:
    specs = [args.genus, args.m, args.b]
    if all(s is None for s in specs):
        rows = list(ruled.TABLE_ROWS)
    elif any(s is None for s in specs) or len({len(s) for s in specs}) != 1:
        return _fail(EXIT_INVALID, "give --genus, --m and --b the same number of times")
    else:
        rows = list(zip(args.genus, args.m, args.b))
    out = []
    for genus, m, b in rows:
        try:
            sol = ruled.solve_x_for_genus(genus, m, b)
        except DomainError as exc:
            return _fail(EXIT_INVALID, f"row genus={genus} m={m} b={b}: {exc}")
        except HermcurvError as exc:
            return _fail(EXIT_SOLVER, f"row genus={genus} m={m} b={b}: {exc}")
        out.append((genus, m, str(ruled.base_scalar(genus, m)), float(b), sol.x, sol.F.c1,
                    sol.F.c2, sol.sC_tilde, ruled.check_positivity_F(sol)))
    _write_text(args.out, _csv_text(TABLE_HEADER, out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# plot


def _plot_data(mf: MetricFile, what: str):
    if what == "F":
        if mf.kind in PROFILE_KINDS:
            raise MetricFileError("F plots need a ruled-surface file")
        z = np.concatenate([[-1.0], mf.arrays["grid_z"], [1.0]])
        sol = mf.admissible()
        return z, {"F": sol.F(z)}, "momentum profile F", "z"
    if mf.kind not in PROFILE_KINDS:
        raise MetricFileError(f"{what} plots need a Hirzebruch profile file")
    p = mf.profile()
    if what == "profiles":
        return p.t, {"f": p.f.values, "h": p.h.values}, "profile functions", "t"
    t = p.interior
    return t, {"s_chern": frame.chern_scalar(p, t), "s_third": frame.third_scalar(p, t),
               "s_riemann": frame.riemannian_scalar(p, t)}, "scalar curvatures", "t"


def cmd_plot(args) -> int:
    try:
        mf = MetricFile.read(args.input)
        x, series, title, xlabel = _plot_data(mf, args.what)
    except (MetricFileError, DomainError) as exc:
        return _fail(EXIT_INVALID, f"malformed input: {exc}")
    out = Path(args.out)
    out.write_text(line_plot(x, series, f"{mf.kind}: {title}", xlabel))
    rows = [[float(a)] + [float(v[i]) for v in series.values()] for i, a in enumerate(x)]
    out.with_suffix(".csv").write_text(_csv_text([xlabel] + list(series), rows))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermcurv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="solve for a metric and write a metric file")
    c.add_argument("--kind", required=True, choices=KINDS)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--genus", type=int)
    c.add_argument("--b", type=float)
    c.add_argument("--phi0", type=float)
    c.add_argument("--phi1", type=float)
    c.add_argument("--n-grid", type=int, default=512)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check the identities of a metric file")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="constant conformal Chern scalar rows on ruled surfaces")
    t.add_argument("--genus", type=int, action="append")
    t.add_argument("--m", type=int, action="append")
    t.add_argument("--b", type=float, action="append")
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_table)

    p = sub.add_parser("plot", help="SVG plot with a paired CSV of the samples")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--what", required=True, choices=("F", "profiles", "curvatures"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        return _fail(EXIT_INVALID, f"cannot write output: {exc}")


if __name__ == "__main__":
    sys.exit(main())
