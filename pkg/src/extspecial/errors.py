"""Exception types shared by every evaluation module."""


class ExtSpecialError(Exception):
    """Base class for all library errors."""


class DomainError(ExtSpecialError, ValueError):
    """An argument lies outside the validated domain of an operation."""


class PoleError(DomainError):
    """A gamma factor was requested at a non-positive integer."""


class NonConvergence(ExtSpecialError, RuntimeError):
    """A quadrature or series failed to meet its tolerance within budget."""


class NonFiniteIntegrand(ExtSpecialError, RuntimeError):
    """An integrand returned NaN or infinity at an interior node."""


class OracleDisagreement(ExtSpecialError, RuntimeError):
    """Oracle refinement stalled before reaching its target accuracy."""
