"""Command-line front end.

Verbs: ``check``, ``eval``, ``jumps``, ``simulate``, ``compare`` and
``scenario list|show``.  Every numeric output uses 17 significant digits so that
CSV files round-trip exactly and are bit-for-bit reproducible.

Exit codes: 0 success, 1 inadmissible data (or refused without ``--force``),
2 invalid input, 3 numerical failure.  Output files are written to a temporary
name and moved into place only after everything succeeded.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import runconfig
from .admissibility import check
from .classical import EvaluationError, InadmissibleData, solve
from .distributional import strengthened_solution
from .fd_oracle import GridError, NonConvergence, compare, make_grid, solve_selfconsistent
from .geometry import GeometryError, classify_array, region_name
from .initial_data import InitialDataError

EXIT_OK, EXIT_INADMISSIBLE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def fmt(v: float) -> str:
    return f"{float(v):.17g}"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


@contextmanager
def atomic_output(path: str | os.PathLike, mode: str = "w"):
    """Open a temporary file next to ``path``; replace ``path`` only on success."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    if not directory.is_dir():
        raise CliError(f"output directory {directory} does not exist")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def check_outputs(*paths) -> None:
    """Fail before any computation if an output directory is missing."""
    for path in paths:
        if path is None:
            continue
        directory = Path(path).parent
        if str(directory) and not directory.is_dir():
            raise CliError(f"output directory {directory} does not exist")


def parse_range(spec: str, what: str) -> np.ndarray:
    """``start:stop:count`` -> ``count`` equally spaced points (endpoints included)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise CliError(f"{what}: expected start:stop:count, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError(f"{what}: expected start:stop:count, got {spec!r}") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise CliError(f"{what}: count must be >= 1 and bounds finite")
    if n > 1 and hi <= lo:
        raise CliError(f"{what}: stop must exceed start")
    return np.linspace(lo, hi, n)


def pgm_bytes(field: np.ndarray, label: str) -> bytes:
    """8-bit binary PGM (P5), first array row at the bottom of the image.

    Scaling is linear: the minimum finite value maps to 0 and the maximum to
    255; non-finite cells are drawn as 0.  The scaling is recorded in a header
    comment.
    """
    finite = np.isfinite(field)
    lo = float(np.min(field[finite])) if np.any(finite) else 0.0
    hi = float(np.max(field[finite])) if np.any(finite) else 0.0
    span = hi - lo
    scaled = np.zeros(field.shape)
    if span > 0:
        scaled[finite] = (field[finite] - lo) / span * 255.0
    img = np.clip(np.rint(scaled), 0, 255).astype(np.uint8)[::-1]
    height, width = img.shape
    header = (f"P5\n# {label}: linear scaling, 0 = {fmt(lo)}, 255 = {fmt(hi)}, nan = 0\n"
              f"{width} {height}\n255\n")
    return header.encode("ascii") + img.tobytes()


def _refuse(report, force: bool):
    if not report.admissible and not force:
        raise CliError("initial data fail the existence conditions; rerun with --force to proceed anyway\n"
                       + report.format(), EXIT_INADMISSIBLE)


# --- commands ---------------------------------------------------------------


def cmd_check(args) -> int:
    rc = runconfig.load(args.config)
    tol = args.tol if args.tol is not None else rc.tol
    report = check(rc.slits, rc.data, tol)
    print(report.format())
    return EXIT_OK if report.admissible else EXIT_INADMISSIBLE


def _solution(rc, method: str, force: bool, tol: float):
    if method == "classical":
        return solve(rc.slits, rc.data, tol, force=force)
    return strengthened_solution(rc.slits, rc.data, tol, force=force)


def cmd_eval(args) -> int:
    check_outputs(args.out, args.pgm)
    rc = runconfig.load(args.config)
    tol = rc.tol
    _refuse(check(rc.slits, rc.data, tol), args.force)
    method = args.method or rc.option("eval", "method", "classical")
    if method not in ("classical", "distributional"):
        raise CliError(f"method must be classical or distributional, got {method!r}")
    xs = parse_range(args.x or rc.option("eval", "x", "-4:6:101"), "--x")
    ts = parse_range(args.t or rc.option("eval", "t", "0:8:81"), "--t")
    if ts[0] < 0:
        raise CliError("--t: times must be >= 0")
    sol = _solution(rc, method, args.force, tol)
    T, X = np.meshgrid(ts, xs, indexing="ij")
    codes = classify_array(rc.slits, X, T)
    vals = {w: sol.evaluate(X, T, w, strict=False) for w in ("u", "ux", "ut")}
    names = {int(c): region_name(int(c)) for c in np.unique(codes)}
    lines = ["x,t,region,u,ux,ut\n"]
    for idx in np.ndindex(X.shape):
        lines.append(",".join((fmt(X[idx]), fmt(T[idx]), names[int(codes[idx])],
                               fmt(vals["u"][idx]), fmt(vals["ux"][idx]), fmt(vals["ut"][idx]))) + "\n")
    pgm = pgm_bytes(vals["u"], f"u ({method})") if args.pgm else None
    with atomic_output(args.out) as fh:
        fh.writelines(lines)
    if pgm is not None:
        with atomic_output(args.pgm, "wb") as fh:
            fh.write(pgm)
    print(f"wrote {X.size} points to {args.out}" + (f" and {args.pgm}" if args.pgm else ""))
    return EXIT_OK


def cmd_jumps(args) -> int:
    check_outputs(args.out)
    rc = runconfig.load(args.config)
    _refuse(check(rc.slits, rc.data, rc.tol), args.force)
    ell = rc.slits.ell
    taus = np.linspace(-ell / 4, 5 * ell / 4, args.n)
    if args.method == "classical":
        _, omega, nu = solve(rc.slits, rc.data, rc.tol, force=args.force).jumps().sample(taus)
    else:
        _, omega, nu = strengthened_solution(rc.slits, rc.data, rc.tol, force=args.force).jumps.sample(taus)
    lines = ["t,omega,nu\n"] + [f"{fmt(t)},{fmt(o)},{fmt(v)}\n" for t, o, v in zip(taus, omega, nu)]
    with atomic_output(args.out) as fh:
        fh.writelines(lines)
    print(f"wrote {taus.size} samples to {args.out}")
    return EXIT_OK


def _fd_window(rc, args, h: float):
    cfg = rc.slits
    tmax = args.tmax if args.tmax is not None else rc.number("fd", "tmax", cfg.b2 + cfg.ell + 2.0)
    xmin = args.xmin if args.xmin is not None else rc.number("fd", "xmin")
    xmax = args.xmax if args.xmax is not None else rc.number("fd", "xmax")
    if xmin is None:
        xmin = math.floor((cfg.a1 - tmax) / h + 1e-9) * h
    if xmax is None:
        xmax = math.ceil((cfg.a2 + tmax) / h - 1e-9) * h
    return xmin, xmax, tmax


def _fd_h(rc, args) -> float:
    h = args.h if args.h is not None else rc.number("fd", "h")
    if h is None:
        raise CliError("grid spacing missing: pass --h or set [fd] h")
    return h


def _run_fd(rc, args, h: float):
    xmin, xmax, tmax = _fd_window(rc, args, h)
    grid = make_grid(rc.slits, h, xmin, xmax, tmax)
    tol = rc.number("fd", "tol", 1e-10)
    max_iter = int(rc.number("fd", "max_iter", 200))
    return solve_selfconsistent(grid, rc.data, tol=tol, max_iter=max_iter, force=args.force,
                                admissibility_tol=rc.tol)


def cmd_simulate(args) -> int:
    check_outputs(args.out, args.pgm)
    rc = runconfig.load(args.config)
    _refuse(check(rc.slits, rc.data, rc.tol), args.force)
    h = _fd_h(rc, args)
    fg = _run_fd(rc, args, h)
    lines = ["x,t,side,u\n"] + [f"{fmt(x)},{fmt(t)},{side},{fmt(u)}\n" for x, t, side, u in fg.nodes()]
    pgm = pgm_bytes(fg.u, f"u (leapfrog, h={fmt(h)})") if args.pgm else None
    with atomic_output(args.out) as fh:
        fh.writelines(lines)
    if pgm is not None:
        with atomic_output(args.pgm, "wb") as fh:
            fh.write(pgm)
    print(f"iterations = {fg.iterations}")
    print(f"fixed_point_residual = {fmt(fg.residual)}")
    for key, val in fg.gluing.items():
        print(f"gluing_{key} = {fmt(val)}")
    print(f"wrote {len(lines) - 1} nodes to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    rc = runconfig.load(args.config)
    report = check(rc.slits, rc.data, rc.tol)
    _refuse(report, args.force)
    h = _fd_h(rc, args)
    refs = {"classical": solve(rc.slits, rc.data, rc.tol, force=args.force),
            "distributional": strengthened_solution(rc.slits, rc.data, rc.tol, force=args.force)}
    errs = {}
    for step in (h, h / 2):
        fg = _run_fd(rc, args, step)
        print(f"[h = {fmt(step)}] iterations = {fg.iterations}, fixed_point_residual = {fmt(fg.residual)}")
        for name, ref in refs.items():
            er = compare(fg, ref)
            errs[(step, name)] = er.max_error
            print(f"  {name}: max_error = {fmt(er.max_error)}  l2_error = {fmt(er.l2_error)}")
    for name in refs:
        fine = errs[(h / 2, name)]
        coarse = errs[(h, name)]
        ratio = coarse / fine if fine > 0 else (math.nan if coarse == 0 else math.inf)
        print(f"refinement_ratio[{name}] = {fmt(ratio)}")
    return EXIT_OK


def cmd_scenario(args) -> int:
    if args.action == "list":
        for name in runconfig.builtin_names():
            print(name)
        return EXIT_OK
    if not args.name:
        raise CliError("scenario show needs a name")
    sys.stdout.write(runconfig.builtin_text(args.name))
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slitwave",
                                description="Wave equation on the plane with two glued slits.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="print existence-condition residuals; exit 0 iff admissible")
    c.add_argument("config", help="scenario file or builtin scenario name")
    c.add_argument("--tol", type=float, default=None)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("eval", help="sample the analytic field on a grid")
    e.add_argument("config")
    e.add_argument("--method", choices=("classical", "distributional"), default=None)
    e.add_argument("--x", help="start:stop:count (default from [eval] x)")
    e.add_argument("--t", help="start:stop:count (default from [eval] t)")
    e.add_argument("--out", required=True, help="CSV output path")
    e.add_argument("--pgm", help="optional PGM heatmap of u")
    e.add_argument("--force", action="store_true", help="evaluate formulas even for inadmissible data")
    e.set_defaults(func=cmd_eval)

    j = sub.add_parser("jumps", help="sample omega and nu on [-ell/4, 5 ell/4]")
    j.add_argument("config")
    j.add_argument("--out", required=True)
    j.add_argument("--n", type=int, default=151, help="number of samples")
    j.add_argument("--method", choices=("classical", "distributional"), default="distributional")
    j.add_argument("--force", action="store_true")
    j.set_defaults(func=cmd_jumps)

    for verb, func, text in (("simulate", cmd_simulate, "run the finite-difference oracle"),
                             ("compare", cmd_compare, "FD errors against both analytic methods at h and h/2")):
        s = sub.add_parser(verb, help=text)
        s.add_argument("config")
        s.add_argument("--h", type=float, default=None)
        s.add_argument("--xmin", type=float, default=None)
        s.add_argument("--xmax", type=float, default=None)
        s.add_argument("--tmax", type=float, default=None)
        s.add_argument("--force", action="store_true")
        if verb == "simulate":
            s.add_argument("--out", required=True)
            s.add_argument("--pgm")
        s.set_defaults(func=func)

    sc = sub.add_parser("scenario", help="list or show builtin scenarios")
    sc.add_argument("action", choices=("list", "show"))
    sc.add_argument("name", nargs="?")
    sc.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InadmissibleData as exc:
        print(f"error: {exc}\n{exc.report.format()}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (runconfig.ConfigError, GeometryError, GridError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonConvergence, InitialDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
