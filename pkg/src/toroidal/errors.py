"""Exception types shared across the library."""


class AlgebraError(Exception):
    """Base class for all library errors."""


class FieldDivisionError(AlgebraError):
    """Division by the zero element of the coefficient field."""


class PoleError(AlgebraError):
    """A substitution or evaluation hit a vanishing denominator."""


class NonSummableError(AlgebraError):
    """A geometric/exponential resummation datum has a log pole (w = 1)."""


class WheelViolationError(AlgebraError):
    """A specialization left a residual pole, so the input is not a valid
    shuffle-algebra element."""


class RegimeError(AlgebraError):
    """A contour integrand has a pole on the contour, or a pole whose
    location is not a monomial."""


class CapExceededError(AlgebraError):
    """A configured size cap (variable count, edge bound, ...) was exceeded."""


class BasisError(AlgebraError):
    """A decomposition or eigenvector computation failed; this would
    contradict a structural property the library relies on."""
