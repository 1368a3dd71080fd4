"""Exception hierarchy shared by all modules."""


class HessframeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(HessframeError, ValueError):
    pass


class InvalidDomainError(HessframeError, ValueError):
    """Bounds with ``low >= high`` or an otherwise unusable sampling region."""


class InsufficientDataError(HessframeError, ValueError):
    pass


class IllConditionedError(HessframeError, ArithmeticError):
    """A linear system is singular to working precision.

    Attributes
    ----------
    rcond : float
        Estimate of the reciprocal condition number that triggered the error.
    """

    def __init__(self, message: str, rcond: float):
        super().__init__(f"{message} (rcond={rcond:.3e})")
        self.rcond = rcond


class ConvergenceError(HessframeError, ArithmeticError):
    pass


class SpecError(HessframeError, ValueError):
    """Invalid experiment specification."""
