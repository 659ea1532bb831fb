"""Exception types shared across the package."""


class OvalspecError(Exception):
    """Base class for all package errors."""


class RejectBadIndex(OvalspecError):
    """A harmonic index below 2 was supplied (closure forbids n = 0, 1)."""


class RejectDuplicateIndex(OvalspecError):
    """The same harmonic index appears more than once."""


class RejectNonConvex(OvalspecError):
    """The certified minimum of (phi^-1)' is at or below the convexity floor."""

    def __init__(self, min_slope: float, floor: float):
        self.min_slope = float(min_slope)
        self.floor = float(floor)
        super().__init__(
            f"min (phi^-1)' = {min_slope:.6g} <= convexity floor {floor:.6g}"
        )


class NoConvergence(OvalspecError):
    """An iterative solve exhausted its iteration cap."""


class NodalGroundState(OvalspecError):
    """The computed lowest eigenvector changes sign; the grid is too coarse."""


class BudgetExceeded(OvalspecError):
    """A resolution or evaluation budget was exhausted.

    May carry a partial result in ``record`` (set by callers that have one).
    """

    def __init__(self, message: str, record=None):
        self.record = record
        super().__init__(message)


class ZeroVector(OvalspecError):
    """A trial vector is identically zero."""


class ZeroProjection(OvalspecError):
    """A projected component has vanishing norm."""


class NotApplicable(OvalspecError):
    """The curve does not match the configuration the check requires."""
