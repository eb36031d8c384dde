"""Independent validation by substitution.

Every solver in this package is checked the same way: put the candidate u
back under the family's integral sign, evaluate that left-hand side by
adaptive quadrature at a tolerance one decade below the residual of interest,
and compare with the data f on a grid.  The harness never reuses the solver's
own kernel representation; it integrates the defining equation directly.

Also here: the fractional Stirling-coefficient check (truncations of
sum_k S(nu, k) x^k f^(k)(x) against the diagonal value sum_n n^nu a_n x^n)
and the side-by-side comparison of the two radial kernel readings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import numpy.polynomial.polynomial as npp

from . import series as series_mod
from .errors import (
    ConvergenceError,
    DivergenceError,
    QuadratureDomainError,
)
from .fracops import weyl_half_radial_batch
from .quadrature import (
    DEFAULT_BUDGET,
    integrate_decaying_batch,
    integrate_finite_batch,
)
from .series import PowerSeries
from .solvers import EquationSpec, Family, SolutionFn
from .specfun import STIRLING_FRAC_MAX_K, stirling2_frac

_TINY = 1e-300
_EXP_UNDERFLOW = 745.0  # exp(-y) is subnormal-or-zero beyond this

DEFAULT_QUAD_TOL = 1e-8


@dataclass(frozen=True)
class ResidualReport:
    """Per-point comparison of the quadrature LHS with the data f.

    ``residuals`` holds |lhs - rhs| with NaN at points whose quadrature
    failed; failed points are excluded from the maxima and counted in
    ``quad_failures``.
    """

    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    residuals: np.ndarray
    max_abs: float
    max_rel: float
    quad_failures: int
    label: str = ""

    def summary(self) -> str:
        tag = f" [{self.label}]" if self.label else ""
        return (
            f"residual check{tag}: {len(self.grid)} points, "
            f"max abs {self.max_abs:.3g}, max rel {self.max_rel:.3g}, "
            f"quad failures {self.quad_failures}"
        )

    def to_csv(self, stream, header_lines: Sequence[str] = ()) -> None:
        """Write '#'-commented header lines, a column row, then the data."""
        for line in header_lines:
            stream.write(f"# {line}\n")
        if self.label:
            stream.write(f"# residual report: {self.label}\n")
        stream.write("x,lhs,rhs,abs_residual\n")
        for x, l, r, d in zip(self.grid, self.lhs, self.rhs, self.residuals):
            stream.write(
                f"{x:.17g},{l:.17g},{r:.17g},{d:.17g}\n"
            )


class ConjectureReport(NamedTuple):
    nu: float
    x: float
    K_values: list[int]
    partial_sums: list[float]
    target: float
    abs_errors: list[float]
    constant_term_excluded: bool


class KernelComparison(NamedTuple):
    """Residual reports for the two readings of the radial solution kernel."""

    transported: ResidualReport
    plain: ResidualReport


def _matrix_evaluator(u) -> Callable[[np.ndarray], np.ndarray]:
    batch = getattr(u, "eval_batch", None)
    if batch is not None:
        def ev(args: np.ndarray) -> np.ndarray:
            flat = batch(np.ravel(np.asarray(args, dtype=float)))
            return np.asarray(flat, dtype=float).reshape(np.shape(args))
        return ev
    scalar = getattr(u, "eval", u)
    vec = np.vectorize(scalar, otypes=[float])
    return lambda args: vec(np.asarray(args, dtype=float))


def _lhs_pass(spec: EquationSpec, u, xs: np.ndarray, tol: float,
              budget: int):
    """One adaptive pass computing the family LHS at every grid point."""
    ev = _matrix_evaluator(u)
    fam = spec.family

    if fam is Family.GAUSSIAN_DILATION:
        def integrand(ys):
            return ev(np.outer(np.exp(-ys * ys), xs))
        return integrate_decaying_batch(integrand, tol=tol, budget=budget)

    if fam is Family.LAPLACE_DILATION:
        mu = spec.mu

        def integrand(ys):
            out = np.zeros((len(ys), len(xs)))
            ok = ys < _EXP_UNDERFLOW
            if ok.any():
                yy = ys[ok]
                out[ok] = np.exp(-yy)[:, None] * ev(np.outer(yy ** mu, xs))
            return out
        return integrate_decaying_batch(integrand, tol=tol, budget=budget)

    if fam is Family.RADIAL:
        def integrand(ys):
            return ev(np.sqrt(xs[None, :] ** 2 + 2.0 * ys[:, None] ** 2))
        return integrate_decaying_batch(integrand, tol=tol, budget=budget)

    if fam is Family.GENERALIZED_SHIFT:
        cmap = spec.cmap
        lo, hi = cmap.domain
        ws = np.asarray(cmap.F(xs), dtype=float)

        def integrand(ys):
            with np.errstate(all="ignore"):
                args = np.asarray(
                    cmap.F_inv(ws[None, :] - (ys * ys)[:, None]), dtype=float
                )
            out = np.zeros_like(args)
            # Outside the open domain the transported argument has left the
            # map's range; admissible f vanish in that limit.
            valid = np.isfinite(args) & (args > lo) & (args < hi)
            if valid.any():
                out[valid] = ev(args[valid])
            return out
        return integrate_decaying_batch(integrand, tol=tol, budget=budget)

    # moebius: finite range (0, a)
    def integrand(ys):
        return ev(xs[None, :] / (1.0 + np.outer(ys, xs)))
    return integrate_finite_batch(integrand, 0.0, spec.a, tol=tol,
                                  budget=budget)


def _lhs_values(spec, u, xs, tol, budget):
    try:
        res = _lhs_pass(spec, u, xs, tol, budget)
        return np.asarray(res.values, dtype=float), np.asarray(res.errors,
                                                               dtype=float)
    except (QuadratureDomainError, DivergenceError, ConvergenceError):
        pass
    # One grid point poisoned the shared pass; redo pointwise so the failure
    # stays local.
    vals = np.empty(len(xs))
    errs = np.empty(len(xs))
    for i, x in enumerate(xs):
        try:
            r = _lhs_pass(spec, u, np.array([float(x)]), tol, budget)
            vals[i] = float(r.values[0])
            errs[i] = float(r.errors[0])
        except (QuadratureDomainError, DivergenceError, ConvergenceError):
            vals[i] = math.nan
            errs[i] = math.inf
    return vals, errs


def residual(spec: EquationSpec, u, grid: Sequence[float],
             quad_tol: float = DEFAULT_QUAD_TOL,
             budget: int = DEFAULT_BUDGET) -> ResidualReport:
    """Substitute u into the family equation and report |LHS - f| per point.

    The LHS quadrature runs at quad_tol/10 so its own error stays an order
    below the residuals being judged; a point whose quadrature error exceeds
    quad_tol (or whose evaluation fails) counts as a quadrature failure.
    """
    xs = np.asarray(list(grid), dtype=float)
    if xs.ndim != 1 or xs.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    rhs = np.array([spec.rhs(float(x)) for x in xs])
    lhs, errs = _lhs_values(spec, u, xs, quad_tol / 10.0, budget)

    failed = ~np.isfinite(lhs) | (errs > quad_tol)
    resid = np.abs(lhs - rhs)
    resid[failed] = math.nan
    ok = ~failed
    if ok.any():
        max_abs = float(np.max(resid[ok]))
        max_rel = float(np.max(resid[ok] / np.maximum(np.abs(rhs[ok]), _TINY)))
    else:
        max_abs = math.nan
        max_rel = math.nan
    return ResidualReport(xs, lhs, rhs, resid, max_abs, max_rel,
                          int(failed.sum()), label=spec.family.value)


def conjecture_check(nu: float, f: PowerSeries, x: float,
                     K: int) -> ConjectureReport:
    """Truncations of the fractional-coefficient sum against the diagonal value.

    Partial sums S_K = sum_{k<=K} S(nu, k) x^k f^(k)(x) are compared with
    sum_{n>=1} n^nu a_n x^n.  The n = 0 term is excluded on both sides: x^k
    d^k annihilates constants and 0^nu = 0; a nonzero a_0 is only flagged.
    K is capped at the coefficient cancellation horizon.
    """
    if not (0.0 < nu < 1.0):
        raise ValueError(f"nu must lie in (0, 1), got {nu}")
    if not x > 0.0:
        raise ValueError("x must be positive")
    if not 0 <= K <= STIRLING_FRAC_MAX_K:
        raise ValueError(
            f"K must lie in [0, {STIRLING_FRAC_MAX_K}] "
            "(coefficient cancellation horizon)"
        )
    target = math.fsum(
        (n ** nu) * a * x ** n for n, a in enumerate(f.coeffs) if n >= 1 and a
    )
    flagged = bool(f.coeffs[0] != 0.0)

    k_values = list(range(K + 1))
    terms = []
    for k in k_values:
        der = series_mod.derivative(f, k)
        fk = float(npp.polyval(x, der.coeffs))
        terms.append(stirling2_frac(nu, k) * (x ** k) * fk)
    partials = []
    acc = 0.0
    for t in terms:
        acc = math.fsum([acc, t])
        partials.append(acc)
    abs_errors = [abs(p - target) for p in partials]
    return ConjectureReport(nu, x, k_values, partials, target, abs_errors,
                            flagged)


def radial_kernel_discrepancy(f, f_prime, grid: Sequence[float],
                              quad_tol: float = DEFAULT_QUAD_TOL,
                              tol: float = 1e-10) -> KernelComparison:
    """Residuals of both radial kernel readings against the same equation.

    The transported kernel differentiates the profile in w = x^2/2; the plain
    reading applies f' to the squared argument directly.  Both candidate
    solutions are substituted into the radial equation; the reports make the
    difference between the two readings machine-checkable (the plain one
    fails by an O(1) margin at x = 0 for the exact Gaussian pair).
    """
    spec = EquationSpec(Family.RADIAL, f=f, f_prime=f_prime)
    reports = {}
    for kind in ("transported", "plain"):
        def eval_batch(xs, _kind=kind):
            res = weyl_half_radial_batch(f, f_prime, xs, tol, kernel=_kind)
            return res.values

        u = SolutionFn(
            eval=lambda x, _eb=eval_batch: float(_eb(np.array([float(x)]))[0]),
            method=f"radial half kernel ({kind})",
            truncation=None,
            error_estimate=tol,
            family=Family.RADIAL,
            eval_batch=eval_batch,
        )
        rep = residual(spec, u, grid, quad_tol)
        reports[kind] = ResidualReport(
            rep.grid, rep.lhs, rep.rhs, rep.residuals, rep.max_abs,
            rep.max_rel, rep.quad_failures, label=f"radial/{kind}",
        )
    return KernelComparison(reports["transported"], reports["plain"])
