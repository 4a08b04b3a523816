"""Exception hierarchy.

Input problems derive from :class:`ParameterError` (a ``ValueError``);
numerical failures derive from :class:`NumericalError`.  The CLI maps the
first group to exit code 2 and the second to exit code 3.
"""


class SchemeError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(SchemeError, ValueError):
    """A parameter tuple violates a documented invariant."""


class DomainError(ParameterError):
    """An argument lies outside the domain of the function (e.g. ``x = 0``)."""


class GenericityError(ParameterError):
    """A discrete support point is not a simple pole, or a point is not in the support."""


class NumericalError(SchemeError, ArithmeticError):
    """A computation failed to reach its accuracy target."""


class PoleError(NumericalError):
    """Evaluation hit a pole (a vanishing denominator factor)."""


class DivergenceError(NumericalError):
    """A series or bilateral sum does not converge."""


class ContinuationError(NumericalError):
    """No available representation covers the requested point."""


class InstabilityError(NumericalError):
    """A recurrence left its validated range (step count or magnitude guard)."""


class QuadratureError(NumericalError):
    """Contour quadrature did not converge within the allowed doublings."""
