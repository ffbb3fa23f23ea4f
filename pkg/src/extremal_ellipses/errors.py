"""Exception hierarchy.

Input problems derive from :class:`GeometryInputError`; numerical failures
derive from :class:`NumericalFailure`. The CLI maps the first family to exit
code 2 and the second to exit code 3.
"""

from __future__ import annotations


class ExtremalEllipseError(Exception):
    """Root of every error raised by this package."""


class GeometryInputError(ExtremalEllipseError, ValueError):
    """The caller supplied geometry the operation is not defined for."""


class NumericalFailure(ExtremalEllipseError, ArithmeticError):
    """A numerical procedure could not reach its contract."""


class NotAnEllipse(GeometryInputError):
    pass


class EmptyConic(GeometryInputError):
    """Quadratic form is definite but the curve has no real points."""


class LimitingConic(GeometryInputError):
    """The quadratic part is singular (AC - B^2 vanishes)."""


class SingularTransform(GeometryInputError):
    pass


class NotAHyperbola(GeometryInputError):
    pass


class DuplicatePoints(GeometryInputError):
    pass


class NotConelliptic(GeometryInputError):
    pass


class ParallelChords(GeometryInputError):
    pass


class DegenerateTriangle(GeometryInputError):
    pass


class NoBracket(NumericalFailure):
    pass


class StepOverflow(NumericalFailure):
    pass


class ToleranceNotMet(NumericalFailure):
    pass
