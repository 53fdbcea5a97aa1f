"""
Exception Hierarchy for twistlab.

Construction-time precondition violations raise one of the exceptions
below.  Mathematical check failures never raise: they are recorded as
``CheckResult`` entries (see ``report.py``) so that a single run can
report every failing identity together with a witness.

Key Concepts Demonstrated:
- A single package-level base exception (``TwistLabError``) for CLI mapping
- Multiple inheritance from builtin exceptions where callers expect them
- Carrying structured context (locations, indices) on the exception
"""

from __future__ import annotations


class TwistLabError(Exception):
    """Base class for every error raised by twistlab."""


class ConfigError(TwistLabError):
    """
    Raised when a session config cannot be read, parsed or validated.

    Attributes:
        location: JSON path (``datum/chi/0``) or ``line:column`` of the
            offending input, when known.
    """

    def __init__(self, message: str, location: str | None = None) -> None:
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class DimensionBudgetError(TwistLabError):
    """Raised when an instance exceeds the configured dimension cap."""


class ConductorOverflowError(TwistLabError, ValueError):
    """Raised when conductor promotion would exceed the configured limit."""


class QFactorialVanishesError(TwistLabError, ZeroDivisionError):
    """Raised when a q-factorial in a denominator is zero."""


class NilpotencyError(TwistLabError):
    """Raised when a q-exponential argument is not nilpotent of the expected order."""


class CompatibilityError(TwistLabError):
    """Raised when a scalar family violates the compatibility conditions."""


class HypothesisError(TwistLabError):
    """Raised when the commutation hypotheses for combining two twists fail."""


class AntipodeError(TwistLabError):
    """Raised when no antipode can be solved for (bialgebra only)."""


class DatumError(TwistLabError):
    """Raised when a quantum-linear-space datum is malformed or invalid."""


class GroupAxiomError(TwistLabError, ValueError):
    """Raised when a Cayley table violates a group axiom."""
