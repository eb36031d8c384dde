"""Shared exception and warning types."""

from __future__ import annotations


class QuadratureDomainError(ValueError):
    """Integrand returned NaN or +-inf at a sampled abscissa."""

    def __init__(self, abscissa: float, message: str | None = None):
        self.abscissa = abscissa
        super().__init__(message or f"non-finite integrand sample at x = {abscissa!r}")


class DivergenceError(ArithmeticError):
    """Partial sums or panel contributions grew beyond any reasonable bound."""


class ConvergenceError(ArithmeticError):
    """An iteration hit its term or truncation cap without meeting tolerance."""


class SpectralDomainError(ValueError):
    """A series carries a nonzero coefficient below a multiplier's domain floor."""

    def __init__(self, index: int, floor: float, message: str | None = None):
        self.index = index
        self.floor = floor
        super().__init__(
            message
            or f"nonzero coefficient at index {index} below the multiplier domain floor {floor}"
        )


class SeriesOverflowError(OverflowError):
    """A single series term overflowed during evaluation."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"series term at index {index} overflowed")


class PrecisionWarning(UserWarning):
    """Result is returned but carries estimated cancellation beyond the stated gate."""


class TruncationWarning(UserWarning):
    """A truncated series was evaluated where its tail is not yet negligible."""


class DecayWarning(UserWarning):
    """A decay precondition probe failed; the result is best-effort."""
