"""Exception types shared across the package."""


class KrError(Exception):
    """Base class for every error raised by krpoly."""


class ZeroEvaluationPointError(KrError, ZeroDivisionError):
    """A Laurent polynomial with negative exponents was evaluated at q = 0."""


class InvalidParametersError(KrError, ValueError):
    """Arguments outside an operation's supported range."""


class BudgetExceededError(KrError):
    """A brute-force enumeration would exceed its configured size cap."""


class InconsistencyError(KrError):
    """Two independent computations of the same quantity disagree.

    Carries the offending index ``n`` when there is one.
    """

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n
