"""Exception hierarchy for the merogrowth toolkit.

Every failure mode that callers are expected to branch on gets its own class;
everything derives from :class:`MerogrowthError` so library users can catch
the lot with one clause.
"""

from __future__ import annotations


class MerogrowthError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(MerogrowthError):
    """Invalid configuration or parameter validation failure (CLI exit 2)."""


class PoleProximityError(MerogrowthError):
    """Evaluation point is within the pole guard of a declared pole."""


class OutsideDomainError(MerogrowthError):
    """Evaluation point lies outside the working disk."""


class UnsupportedFunctionError(MerogrowthError):
    """Operation requested on a function kind without the needed rules."""


class PoleOnCircleError(MerogrowthError):
    """A declared pole sits within guard distance of the sampling circle."""


class NonIntegerResidueError(MerogrowthError):
    """Contour count did not converge to an integer; undeclared zero or pole."""


class QuadratureStallError(MerogrowthError):
    """Circle quadrature hit the sample cap without meeting its tolerance."""


class UnvalidatedPoleListError(MerogrowthError):
    """Declared pole list failed (or cannot run) the contour-count check."""


class DegenerateCharacteristicError(MerogrowthError):
    """Characteristic is numerically zero where a ratio of it is required."""


class StepCollapseError(MerogrowthError):
    """Integrator step size underflowed, typically a near-pole passage."""


class ToleranceUnmetError(MerogrowthError):
    """Integrator could not satisfy the requested local error tolerance."""


class NoAdmissiblePathError(MerogrowthError):
    """No candidate base angle yields a path clearing poles and exclusions."""

    def __init__(self, message: str, attempted_angles: tuple = (), blocking: tuple = ()):
        super().__init__(message)
        self.attempted_angles = tuple(attempted_angles)
        self.blocking = tuple(blocking)


class NotDecomposableError(MerogrowthError):
    """Function carries no quotient representation to split into entire parts."""


class BoundDomainError(MerogrowthError):
    """Bound formula evaluated outside its parameter domain."""


class EtaTooLargeError(BoundDomainError):
    """Disk budget parameter exceeds the density theorem's threshold."""


class NotNormalizedError(MerogrowthError):
    """Minimum-modulus check requires f(0) = 1."""


class DegenerateCoefficientsError(MerogrowthError):
    """All coefficients constant; the comparison formula is vacuous."""


class ZeroDataUnavailableError(MerogrowthError):
    """Exhaustive zero data required but not declared for this function."""
