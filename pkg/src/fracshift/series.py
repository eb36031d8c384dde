"""Truncated power series acted on by spectral multipliers.

Coefficients are plain x^n coefficients (a_n multiplies x^n directly; any
factorial bookkeeping belongs to the coefficient rule that built the series).
A diagonal operator g(x d/dx) acts coefficient-wise: a_n -> g(n) * a_n.
Series are index-complete from 0 through ``order``; zeros are stored.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    PrecisionWarning,
    SeriesOverflowError,
    SpectralDomainError,
    TruncationWarning,
)

DEFAULT_ORDER = 64
CANCELLATION_GATE = 1e6
_TINY = 1e-300


@dataclass(frozen=True)
class PowerSeries:
    coeffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        if not np.isfinite(arr).all():
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class SpectralMultiplier:
    """Diagonal symbol phi(n) with its admissible index range.

    ``domain_floor`` is the smallest index at which phi may be consulted;
    a nonzero coefficient below it is a hard error, zero coefficients pass
    through without consulting phi at all.
    """

    phi: Callable[[float], float]
    domain_floor: float = 0.0
    description: str = ""


class EvalResult(NamedTuple):
    value: float
    cancellation_index: float


def from_coefficient_rule(rule: Callable[[int], float],
                          order: int = DEFAULT_ORDER,
                          label: str = "") -> PowerSeries:
    """Build a series from an index -> coefficient rule (0 through order)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs = [float(rule(n)) for n in range(order + 1)]
    if not all(math.isfinite(c) for c in coeffs):
        bad = next(n for n, c in enumerate(coeffs) if not math.isfinite(c))
        raise ValueError(f"coefficient rule returned a non-finite value at n={bad}")
    return PowerSeries(np.array(coeffs), label=label)


def apply_multiplier(m: SpectralMultiplier, s: PowerSeries) -> PowerSeries:
    out = np.zeros(s.order + 1)
    for n, a in enumerate(s.coeffs):
        if a == 0.0:
            continue
        if n < m.domain_floor:
            raise SpectralDomainError(n, m.domain_floor)
        phi_n = float(m.phi(n))
        if not math.isfinite(phi_n):
            raise ValueError(f"multiplier value is not finite at index {n}")
        out[n] = a * phi_n
    label = f"{m.description}[{s.label}]" if m.description else s.label
    return PowerSeries(out, label=label)


def evaluate(s: PowerSeries, x: float) -> EvalResult:
    """Evaluate the truncated series at x with compensated summation.

    Returns the value and the cancellation index sum|a_n x^n| / |value|.
    Raises SeriesOverflowError if a single term overflows.  Warns
    (TruncationWarning) when the term at the truncation order is not yet
    negligible, and (PrecisionWarning) when the cancellation index passes the
    gate beyond which callers should switch to a quadrature route.
    """
    total = 0.0
    comp = 0.0  # Neumaier correction
    abs_sum = 0.0
    power = 1.0
    last_term = 0.0
    for n, a in enumerate(s.coeffs):
        term = a * power
        if not math.isfinite(term) or not math.isfinite(power):
            raise SeriesOverflowError(n)
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        abs_sum += abs(term)
        last_term = term
        power *= x
    value = total + comp
    index = abs_sum / max(abs(value), _TINY)
    if abs(last_term) > 1e-16 * abs(value):
        warnings.warn(
            f"series '{s.label}' truncation not converged at x={x!r}",
            TruncationWarning, stacklevel=2,
        )
    if index > CANCELLATION_GATE:
        warnings.warn(
            f"series '{s.label}' cancellation index {index:.3g} at x={x!r}; "
            "use a quadrature route",
            PrecisionWarning, stacklevel=2,
        )
    return EvalResult(float(value), float(index))


def derivative(s: PowerSeries, k: int) -> PowerSeries:
    """k-th derivative as a series (order drops by k)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return s
    n = s.order
    if k > n:
        return PowerSeries(np.zeros(1), label=f"d^{k}[{s.label}]")
    out = np.empty(n - k + 1)
    for j in range(n - k + 1):
        fall = 1.0
        for i in range(j + 1, j + k + 1):
            fall *= i
        out[j] = s.coeffs[j + k] * fall
    return PowerSeries(out, label=f"d^{k}[{s.label}]")
