"""Exception types shared across the package.

Every error raised by library operations derives from LogSurfError, so
callers (notably the CLI) can distinguish domain failures from bugs.
"""

from __future__ import annotations


class LogSurfError(Exception):
    """Base class for all library errors."""


class OutOfRadius(LogSurfError):
    """Evaluation requested outside an asserted radius of validity."""


class InvalidGerm(LogSurfError):
    """A germ with k = 0 was passed where k >= 1 is required."""


class NotInvertible(LogSurfError):
    """Inversion requested for a germ outside the k = 1 group."""


class NoSupport(LogSurfError):
    """The zero series has no least exponent."""


class UndecidableAngle(LogSurfError):
    """A raw floating angle cannot decide rationality; declare it."""


class ResonanceUndeclared(LogSurfError):
    """A wedge solve needed a resonance decision the angle data lacks."""


class PoleCoincidence(LogSurfError):
    """Green function evaluated at its own pole."""


class NotNormalized(LogSurfError):
    """Reflection setup requires a normalized corner description."""


class OutsideExtension(LogSurfError):
    """Point lies outside the region reached by the computed steps."""


class InsufficientSteps(LogSurfError):
    """Not enough reflection steps for the requested computation."""


class WindowEmpty(LogSurfError):
    """A certificate window radius underflowed before the last step."""


class SchemaError(LogSurfError):
    """A scenario file does not match the expected schema."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class ScenarioError(LogSurfError):
    """A scenario failed while running; carries the failing location."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
