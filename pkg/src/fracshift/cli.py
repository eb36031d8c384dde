"""Command line front end.

Subcommands:
  solve       solve one equation family for a catalog generator, emit x,u CSV
  verify      solve and then residual-check against the defining integral
  fig1        tabulate the odd operator integral F(x; nu) over [0, x-max]
  conjecture  compare fractional-coefficient partial sums with the target sum

Exit status: 0 on success, 1 on numerical failure (divergence, lost
convergence, residual above the family bound), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import IO, Iterable, Sequence

import numpy as np

from . import catalog
from .errors import (
    ConvergenceError,
    DivergenceError,
    QuadratureDomainError,
    SeriesOverflowError,
    SpectralDomainError,
)
from .fracops import CoordinateMap, log_map, reflected_radial_map
from .opeval import eval_F, eval_F_quadrature
from .quadrature import DEFAULT_TOL
from .solvers import EquationSpec, Family, solve
from .verify import conjecture_check, residual

_NUMERIC_ERRORS = (
    ConvergenceError,
    DivergenceError,
    QuadratureDomainError,
    SeriesOverflowError,
    SpectralDomainError,
)

# residual acceptance bound per family, scalar-quadrature LHS at quad-tol 1e-8
_FAMILY_BOUND = {
    Family.GAUSSIAN_DILATION: 1e-6,
    Family.LAPLACE_DILATION: 1e-7,
    Family.RADIAL: 1e-6,
    Family.GENERALIZED_SHIFT: 1e-6,
    Family.MOEBIUS: 1e-5,
}

_DEFAULT_GRID = {
    Family.GAUSSIAN_DILATION: "geom:0.1:5:25",
    Family.LAPLACE_DILATION: "geom:0.1:3:15",
    Family.RADIAL: "0:3:13",
    Family.GENERALIZED_SHIFT: "geom:0.1:5:25",
    Family.MOEBIUS: "geom:0.1:3:15",
}

_MAPS = {"log": log_map, "reflected-radial": reflected_radial_map}

_FIG1_CROSSCHECK_BOUND = 1e-7


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` -> linspace, ``geom:a:b:n`` -> geomspace.

    Endpoints are inclusive.  Raises ValueError on malformed input.
    """
    parts = text.split(":")
    if parts and parts[0] == "geom":
        if len(parts) != 4:
            raise ValueError(f"geometric grid needs geom:a:b:n, got {text!r}")
        a, b = float(parts[1]), float(parts[2])
        n = int(parts[3])
        if n < 1:
            raise ValueError("grid needs at least one point")
        if not (a > 0.0 and b > 0.0):
            raise ValueError("geometric grid endpoints must be positive")
        return np.geomspace(a, b, n)
    if len(parts) != 3:
        raise ValueError(f"grid needs start:stop:count or geom:a:b:n, got {text!r}")
    a, b = float(parts[0]), float(parts[1])
    n = int(parts[2])
    if n < 1:
        raise ValueError("grid needs at least one point")
    return np.linspace(a, b, n)


@contextlib.contextmanager
def _out_stream(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _write_table(stream: IO[str], header_lines: Iterable[str],
                 columns: Sequence[str], rows: np.ndarray) -> None:
    for line in header_lines:
        stream.write(f"# {line}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _build_spec(args, parser: argparse.ArgumentParser) -> EquationSpec:
    family = Family(args.family)
    entry = catalog.get(args.f)
    if family is Family.LAPLACE_DILATION:
        if entry.series is None:
            parser.error(f"{entry.name} has no power-series form; "
                         "the spectral solver needs one")
        return EquationSpec(family, f_series=entry.series, mu=args.mu)
    if family is Family.MOEBIUS:
        return EquationSpec(family, f=entry.f, f_prime=entry.f_prime, a=args.a)
    if family is Family.GENERALIZED_SHIFT:
        cmap: CoordinateMap = _MAPS[args.map]()
        return EquationSpec(family, f=entry.f, f_prime=entry.f_prime, cmap=cmap)
    return EquationSpec(family, f=entry.f, f_prime=entry.f_prime)


def _spec_header(args, spec: EquationSpec) -> list[str]:
    lines = [f"family = {spec.family.value}", f"f = {args.f}"]
    if spec.family is Family.LAPLACE_DILATION:
        lines.append(f"mu = {spec.mu:g}")
    elif spec.family is Family.MOEBIUS:
        lines.append(f"a = {spec.a:g}")
    elif spec.family is Family.GENERALIZED_SHIFT:
        lines.append(f"map = {args.map}")
    return lines


def _solution_values(u, xs: np.ndarray) -> np.ndarray:
    if u.eval_batch is not None:
        return np.asarray(u.eval_batch(xs), dtype=float)
    return np.array([u.eval(float(x)) for x in xs])


def _parse_grid_or_usage(text: str, parser) -> np.ndarray:
    try:
        return parse_grid(text)
    except ValueError as exc:
        parser.error(str(exc))


def _cmd_solve(args, parser) -> int:
    spec = _build_spec(args, parser)
    grid = _parse_grid_or_usage(args.grid, parser)
    u = solve(spec, tol=args.tol)
    values = _solution_values(u, grid)
    header = ["fracshift solve", *_spec_header(args, spec),
              f"grid = {args.grid}", f"tol = {args.tol:g}",
              f"method = {u.method}"]
    if u.truncation is not None:
        header.append(f"truncation = {u.truncation}")
    header.append(f"error_estimate = {u.error_estimate:.3g}")
    with _out_stream(args.output) as stream:
        _write_table(stream, header, ["x", "u"],
                     np.column_stack([grid, values]))
    return 0


def _cmd_verify(args, parser) -> int:
    spec = _build_spec(args, parser)
    grid_text = args.grid or _DEFAULT_GRID[spec.family]
    grid = _parse_grid_or_usage(grid_text, parser)
    u = solve(spec, tol=args.tol)
    report = residual(spec, u, grid, quad_tol=args.quad_tol)
    print(report.summary())
    bound = _FAMILY_BOUND[spec.family]
    ok = report.quad_failures == 0 and report.max_abs <= bound
    print(f"bound {bound:g}: {'pass' if ok else 'FAIL'}")
    if args.output is not None:
        header = ["fracshift verify", *_spec_header(args, spec),
                  f"grid = {grid_text}", f"tol = {args.tol:g}",
                  f"quad_tol = {args.quad_tol:g}", f"bound = {bound:g}"]
        with open(args.output, "w") as fh:
            report.to_csv(fh, header)
    return 0 if ok else 1


def _cmd_fig1(args, parser) -> int:
    try:
        nus = [float(tok) for tok in args.nu.split(",") if tok]
    except ValueError:
        parser.error(f"--nu needs a comma-separated float list, got {args.nu!r}")
    if not nus:
        parser.error("--nu needs at least one value")
    for nu in nus:
        if nu < 0.5:
            parser.error(f"nu must be >= 0.5, got {nu:g}")
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    if not args.x_max > 0.0:
        parser.error("--x-max must be positive")

    xs = np.linspace(0.0, args.x_max, args.samples)
    cols = np.empty((len(xs), len(nus)))
    for j, nu in enumerate(nus):
        for i, x in enumerate(xs):
            cols[i, j] = eval_F(float(x), nu, tol=args.tol)

    if args.verify:
        worst = 0.0
        for j, nu in enumerate(nus):
            for i, x in enumerate(xs):
                ref = eval_F_quadrature(float(x), nu, tol=1e-10)
                worst = max(worst, abs(cols[i, j] - ref.value))
        print(f"cross-check max |series - quadrature| = {worst:.3g}",
              file=sys.stderr)
        if worst > _FIG1_CROSSCHECK_BOUND:
            print(f"cross-check FAILED (bound {_FIG1_CROSSCHECK_BOUND:g})",
                  file=sys.stderr)
            return 1

    header = ["fracshift fig1",
              "nu = " + ",".join(f"{nu:g}" for nu in nus),
              f"x_max = {args.x_max:g}", f"samples = {args.samples}",
              f"tol = {args.tol:g}"]
    names = ["x"] + [f"F(nu={nu:g})" for nu in nus]
    with _out_stream(args.output) as stream:
        _write_table(stream, header, names, np.column_stack([xs, cols]))
    return 0


def _cmd_conjecture(args, parser) -> int:
    entry = catalog.get(args.f)
    if entry.series is None:
        parser.error(f"{entry.name} has no power-series form")
    report = conjecture_check(args.nu, entry.series, args.x, K=args.K)
    print(f"conjecture check: nu={report.nu:g} x={report.x:g} "
          f"f={args.f} target={report.target:.17g}")
    if report.constant_term_excluded:
        print("note: nonzero constant term excluded on both sides")
    for K, s, e in zip(report.K_values, report.partial_sums,
                       report.abs_errors):
        print(f"  K={K:3d}  partial={s: .17g}  abs_err={e:.3g}")
    final = report.abs_errors[-1]
    ok = final <= 1e-6
    print(f"final abs error {final:.3g}: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracshift",
        description="Dilatation and shift-kernel equation solvers with "
                    "quadrature-backed verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    families = [fam.value for fam in Family]

    def add_common(p, with_grid_default: str | None):
        p.add_argument("--f", required=True, metavar="NAME",
                       help=f"generator; one of {catalog.available()}")
        if with_grid_default is None:
            p.add_argument("--grid", required=True,
                           help="start:stop:count (linear) or geom:a:b:n")
        else:
            p.add_argument("--grid", default=None,
                           help="start:stop:count (linear) or geom:a:b:n "
                                "(default: per family)")
        p.add_argument("--mu", type=float, default=1.0,
                       help="laplace step exponent (default %(default)s)")
        p.add_argument("--a", type=float, default=1.0,
                       help="moebius window length (default %(default)s)")
        p.add_argument("--map", choices=sorted(_MAPS), default="log",
                       help="genshift coordinate map (default %(default)s)")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="solver tolerance (default %(default)g)")

    p_solve = sub.add_parser("solve", help="solve one family, emit x,u CSV")
    p_solve.add_argument("family", choices=families)
    add_common(p_solve, with_grid_default=None)
    p_solve.add_argument("--output", metavar="PATH",
                         help="write CSV here instead of stdout")

    p_verify = sub.add_parser("verify",
                              help="solve, then residual-check the "
                                   "defining integral")
    p_verify.add_argument("family", choices=families)
    add_common(p_verify, with_grid_default="per-family")
    p_verify.add_argument("--quad-tol", type=float, default=1e-8,
                          help="residual quadrature tolerance "
                               "(default %(default)g)")
    p_verify.add_argument("--output", metavar="PATH",
                          help="write the residual table here")

    p_fig = sub.add_parser("fig1",
                           help="tabulate F(x; nu) on [0, x-max]")
    p_fig.add_argument("--nu", default="1.5,4.1",
                       help="comma-separated exponents, each >= 0.5 "
                            "(default %(default)s)")
    p_fig.add_argument("--x-max", type=float, default=10.0,
                       help="upper end of the x range (default %(default)g)")
    p_fig.add_argument("--samples", type=int, default=201,
                       help="number of grid points (default %(default)s)")
    p_fig.add_argument("--tol", type=float, default=1e-14,
                       help="series tolerance (default %(default)g)")
    p_fig.add_argument("--verify", action="store_true",
                       help="cross-check every value against direct "
                            "quadrature before writing")
    p_fig.add_argument("--output", metavar="PATH",
                       help="write CSV here instead of stdout")

    p_conj = sub.add_parser("conjecture",
                            help="fractional-coefficient partial sums vs "
                                 "the diagonal target")
    p_conj.add_argument("--nu", type=float, required=True,
                        help="fractional order in (0, 1)")
    p_conj.add_argument("--f", required=True, metavar="NAME",
                        help="generator with a power-series form")
    p_conj.add_argument("--x", type=float, required=True,
                        help="evaluation point, > 0")
    p_conj.add_argument("--K", type=int, default=40,
                        help="truncation order (default %(default)s)")

    p_solve.set_defaults(func=_cmd_solve)
    p_verify.set_defaults(func=_cmd_verify)
    p_fig.set_defaults(func=_cmd_fig1)
    p_conj.set_defaults(func=_cmd_conjecture)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
