"""Exception hierarchy shared across the package."""


class ConvexFitError(Exception):
    """Base class for all errors raised by this package."""


class DataError(ConvexFitError):
    """Invalid input data: bad shapes, non-finite entries, malformed files."""


class DimensionError(DataError):
    """Dimension mismatch between a model and its input."""


class SerializationError(DataError):
    """Malformed model document; carries a location string when available."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)
        self.location = location


class FitError(ConvexFitError):
    """Numerical failure during fitting.

    When a solver stops without meeting its tolerances, the best iterate
    and its residuals are attached so callers can inspect what happened.
    """

    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = residuals


class SolveError(ConvexFitError):
    """Numerical failure inside the box-constrained minimizer."""
