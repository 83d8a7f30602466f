"""Exception hierarchy shared by all curvebounds modules."""

from __future__ import annotations


class CurveBoundsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CurveBoundsError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class RadicandMismatch(CurveBoundsError, ValueError):
    """Arithmetic between quadratic irrationals over different radicands."""


class BelowIharaRange(CurveBoundsError):
    """The genus is below the order-2 threshold; use the Weil bounds instead."""

    def __init__(self, q: int, g: int, threshold: int):
        self.q = q
        self.g = g
        self.threshold = threshold
        super().__init__(
            f"g={g} is below the order-2 range for q={q}: "
            f"requires g >= {threshold} (= ceil((q - sqrt(q))/2))"
        )


class OutOfIharaRange(CurveBoundsError):
    """A genus family leaves the order-2 range for this field size."""


class InvalidCut(CurveBoundsError, ValueError):
    """An affine cut violates the structural sign/normalization rules."""


class UncertifiedCut(CurveBoundsError):
    """An affine cut was used without a positivity certificate."""


class NotPositiveDefinite(CurveBoundsError, ValueError):
    """A 2x2 refinement matrix fails the positive-definiteness test."""


class NotPSD(CurveBoundsError, ValueError):
    """A 2x2 refinement matrix fails the positive-semidefiniteness test."""


class IntegralityViolation(CurveBoundsError, ValueError):
    """A refinement matrix fails its integrality certificate."""


class NoRealRoot(CurveBoundsError):
    """The order-3 boundary quadratic has no real root for these parameters."""


class EmptySearch(CurveBoundsError):
    """A matrix search produced no certifiable candidate within budget."""


class DegreeTooHigh(CurveBoundsError, ValueError):
    """The requested trace order exceeds what the certifier supports."""
