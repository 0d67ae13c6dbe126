"""Exception types shared across the package."""


class BdworkError(Exception):
    """Base class for all bdwork-specific errors."""


class IngestError(BdworkError):
    """A measurement file could not be parsed or violates the schema."""


class CurveValidationError(BdworkError):
    """A curve does not satisfy the preconditions of the requested operation."""


class OutOfDomainError(BdworkError):
    """Evaluation or integration was requested outside the fitted range."""


class NoOverlapError(BdworkError):
    """The two curves have no overlapping range to integrate over."""


class AxisNotInvertibleError(BdworkError):
    """The cost axis is not strictly monotone, so it cannot serve as abscissa."""
