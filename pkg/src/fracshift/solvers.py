"""One solver per dilation/shift-kernel integral-equation family.

The five families, written with unknown u under the integral and data f:

  gaussian dilation   int_0^inf u(x e^{-y^2}) dy           = f(x)
  laplace dilation    int_0^inf e^{-y} u(x y^mu) dy        = f(x),  mu > 0
  radial              int_0^inf u(sqrt(x^2 + 2 y^2)) dy    = f(x)
  generalized shift   int_0^inf u(F_inv(F(x) - y^2)) dy    = f(x)
  moebius             int_0^a  u(x / (1 + x y)) dy         = f(x),  a > 0

Each kernel is the exponential of a first-order generator acting on u, so the
equation inverts spectrally: the first four via the half power of the
generator ((2/sqrt(pi)) sqrt(G) f), the laplace family via the inverse-gamma
coefficient map b_n = a_n / Gamma(mu n + 1), and the moebius family via the
geometric expansion of (1 - exp(-a x^2 d/dx))^{-1} applied to x^2 f'.

Solvers return SolutionFn handles; nothing is precomputed on a grid.  Function
handles should accept numpy arrays (everything in `catalog` does); scalar-only
callables are detected by a probe at x in {0.5, 1.5} and wrapped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.polynomial.polynomial as npp

from . import fracops
from .errors import ConvergenceError
from .fracops import CoordinateMap
from .quadrature import DEFAULT_TOL
from .series import PowerSeries, SpectralMultiplier, apply_multiplier, evaluate
from .specfun import recip_gamma


class Family(enum.Enum):
    GAUSSIAN_DILATION = "gaussian"
    LAPLACE_DILATION = "laplace"
    RADIAL = "radial"
    GENERALIZED_SHIFT = "genshift"
    MOEBIUS = "moebius"


@dataclass(frozen=True)
class EquationSpec:
    """One equation instance: a family tag, its data f, and parameters.

    Required pieces per family (checked at construction):
      laplace  -> f_series and mu > 0
      moebius  -> f, f_prime, a > 0, and f(0) = 0 (probed as |f(1e-8)| < 1e-6)
      genshift -> f, f_prime, cmap
      gaussian, radial -> f, f_prime
    """

    family: Family
    f: Callable | None = None
    f_prime: Callable | None = None
    f_series: PowerSeries | None = None
    mu: float | None = None
    a: float | None = None
    cmap: CoordinateMap | None = None

    def __post_init__(self):
        fam = self.family
        if fam is Family.LAPLACE_DILATION:
            if self.f_series is None:
                raise ValueError("laplace dilation needs the series form of f")
            if self.mu is None or not self.mu > 0.0:
                raise ValueError("laplace dilation needs mu > 0")
            return
        if self.f is None or self.f_prime is None:
            raise ValueError(f"{fam.value} needs both f and f'")
        if fam is Family.MOEBIUS:
            if self.a is None or not self.a > 0.0:
                raise ValueError("moebius family needs a > 0")
            _check_vanishes_at_zero(self.f)
        elif fam is Family.GENERALIZED_SHIFT:
            if self.cmap is None:
                raise ValueError("generalized shift needs a coordinate map")

    def rhs(self, x: float) -> float:
        if self.f is not None:
            return float(self.f(x))
        return evaluate(self.f_series, x).value


@dataclass(frozen=True)
class SolutionFn:
    """Evaluable solution with method metadata.

    ``eval`` is the scalar entry point; ``eval_batch`` (when present) maps a
    1-d argument array to values in one adaptive pass and is what the residual
    harness uses.  ``series`` is set for the spectral (laplace) family.
    """

    eval: Callable[[float], float]
    method: str
    truncation: int | None
    error_estimate: float
    family: Family
    eval_batch: Callable[[np.ndarray], np.ndarray] | None = None
    series: PowerSeries | None = None

    def __call__(self, x: float) -> float:
        return self.eval(x)


def _check_vanishes_at_zero(f) -> None:
    if abs(float(f(1e-8))) >= 1e-6:
        raise ValueError(
            "f(0) must vanish: the generator annihilates constants, so a "
            "constant component of f is unreachable"
        )


def _ensure_vectorized(h):
    if h is None:
        return None
    try:
        out = np.asarray(h(np.array([0.5, 1.5])), dtype=float)
        if out.shape == (2,):
            return h
    except Exception:
        pass
    return np.vectorize(h, otypes=[float])


def _need(res, what: str):
    if not res.converged:
        raise ConvergenceError(
            f"{what}: quadrature error {float(res.errors.max()):.3g} "
            f"after {res.evaluations} evaluations"
        )
    return res


def solve_gaussian_dilation(f, f_prime, tol: float = DEFAULT_TOL) -> SolutionFn:
    """u = (2/sqrt(pi)) sqrt(x d/dx) f, computed from the caller's f'."""
    fp = _ensure_vectorized(f_prime)

    def eval_batch(xs: np.ndarray) -> np.ndarray:
        res = fracops.half_sqrt_xd_batch(fp, np.asarray(xs, dtype=float), tol)
        return _need(res, "gaussian dilation kernel").values

    def eval_one(x: float) -> float:
        return float(eval_batch(np.array([float(x)]))[0])

    return SolutionFn(eval_one, "half power of the scale derivative", None,
                      tol, Family.GAUSSIAN_DILATION, eval_batch)


def solve_laplace_dilation(f_series: PowerSeries, mu: float) -> SolutionFn:
    """Coefficient map a_n -> a_n / Gamma(mu n + 1), evaluated as a series.

    mu = 1 turns exp(-x) into the J0(2 sqrt(x)) series; integer mu = m gives
    the order-0 Bessel-Wright series with gamma step m.
    """
    if not mu > 0.0:
        raise ValueError("mu must be positive")
    inv_gamma = SpectralMultiplier(
        lambda n: recip_gamma(mu * n + 1.0), 0.0,
        f"inv-gamma(step={mu:g})",
    )
    u_series = apply_multiplier(inv_gamma, f_series)
    coeffs = u_series.coeffs

    def eval_batch(xs: np.ndarray) -> np.ndarray:
        return np.asarray(npp.polyval(np.asarray(xs, dtype=float), coeffs),
                          dtype=float)

    def eval_one(x: float) -> float:
        return evaluate(u_series, x).value

    return SolutionFn(eval_one, "inverse-gamma spectral coefficient map",
                      u_series.order, abs(float(coeffs[-1])),
                      Family.LAPLACE_DILATION, eval_batch, u_series)


def solve_radial(f, f_prime, tol: float = DEFAULT_TOL) -> SolutionFn:
    """u = -(2/sqrt(pi)) sqrt(-(1/x) d/dx) f via the ascending half kernel."""
    fv = _ensure_vectorized(f)
    fp = _ensure_vectorized(f_prime)

    def eval_batch(xs: np.ndarray) -> np.ndarray:
        res = fracops.weyl_half_radial_batch(fv, fp, np.asarray(xs, dtype=float),
                                             tol)
        return _need(res, "radial half kernel").values

    def eval_one(x: float) -> float:
        return float(eval_batch(np.array([float(x)]))[0])

    return SolutionFn(eval_one, "ascending half power in w = x^2/2", None,
                      tol, Family.RADIAL, eval_batch)


def solve_generalized_shift(cmap: CoordinateMap, f, f_prime,
                            tol: float = DEFAULT_TOL) -> SolutionFn:
    """u = (2/sqrt(pi)) sqrt(q(x) d/dx) f in the transported coordinate."""
    fv = _ensure_vectorized(f)
    fp = _ensure_vectorized(f_prime)

    def eval_batch(xs: np.ndarray) -> np.ndarray:
        res = fracops.generalized_half_batch(cmap, fv, fp,
                                             np.asarray(xs, dtype=float), tol)
        return _need(res, "transported half kernel").values

    def eval_one(x: float) -> float:
        return float(eval_batch(np.array([float(x)]))[0])

    return SolutionFn(eval_one, f"half power transported by '{cmap.name}' map",
                      None, tol, Family.GENERALIZED_SHIFT, eval_batch)


# -- moebius family ----------------------------------------------------------

_K_START = 64
_K_CAP = 100_000


def moebius_partial_sum(f, f_prime, a: float, xs: np.ndarray,
                        K: int) -> np.ndarray:
    """Shift-series value truncated at k = K, with the integral tail folded in.

    u_K(x) = sum_{k=0}^{K} h(x_k) + T(K), h(t) = t^2 f'(t),
    x_k = x/(1 + k a x).  The tail T is the Euler-Maclaurin closure of the
    remainder: its integral part telescopes exactly to f(x_{K+1})/a, and the
    first correction terms use a central difference for h'.  The leftover is
    O(K^-5), so doubling K is a sharp convergence check.
    """
    fv = _ensure_vectorized(f)
    fp = _ensure_vectorized(f_prime)
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    live = xs > 0.0
    if not live.any():
        return out
    xl = xs[live]
    ks = np.arange(K + 3, dtype=float)
    xk = xl[None, :] / (1.0 + a * np.outer(ks, xl))
    g = xk * xk * np.asarray(fp(xk), dtype=float)
    head = g[: K + 1].sum(axis=0)
    tail = np.asarray(fv(xk[K + 1]), dtype=float) / a + 0.5 * g[K + 1] \
        - (g[K + 2] - g[K]) / 24.0
    out[live] = head + tail
    return out


def solve_moebius(f, f_prime, a: float, tol: float = DEFAULT_TOL) -> SolutionFn:
    if not a > 0.0:
        raise ValueError("a must be positive")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    _check_vanishes_at_zero(f)

    def converge(xs: np.ndarray):
        K = _K_START
        prev = moebius_partial_sum(f, f_prime, a, xs, K)
        while True:
            K2 = 2 * K
            cur = moebius_partial_sum(f, f_prime, a, xs, K2)
            diff = float(np.max(np.abs(cur - prev)))
            if diff <= tol:
                return cur, K, diff
            if K2 >= _K_CAP:
                raise ConvergenceError(
                    f"shift-series cap K={K2} reached with doubling "
                    f"difference {diff:.3g} > {tol:g}"
                )
            K, prev = K2, cur

    def eval_batch(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if (xs < 0.0).any():
            raise ValueError("arguments must be >= 0")
        return converge(xs)[0]

    def eval_one(x: float) -> float:
        return float(eval_batch(np.array([float(x)]))[0])

    _, k_probe, diff_probe = converge(np.array([1.0]))
    return SolutionFn(eval_one, "geometric shift series, tail closed by "
                      "Euler-Maclaurin", k_probe, diff_probe, Family.MOEBIUS,
                      eval_batch)


def solve(spec: EquationSpec, tol: float = DEFAULT_TOL) -> SolutionFn:
    """Dispatch to the family solver for an EquationSpec."""
    fam = spec.family
    if fam is Family.GAUSSIAN_DILATION:
        return solve_gaussian_dilation(spec.f, spec.f_prime, tol)
    if fam is Family.LAPLACE_DILATION:
        return solve_laplace_dilation(spec.f_series, spec.mu)
    if fam is Family.RADIAL:
        return solve_radial(spec.f, spec.f_prime, tol)
    if fam is Family.GENERALIZED_SHIFT:
        return solve_generalized_shift(spec.cmap, spec.f, spec.f_prime, tol)
    return solve_moebius(spec.f, spec.f_prime, spec.a, tol)
