"""Exception types shared across the package."""


class MinReflectError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(MinReflectError):
    """Routing matrix is not square."""


class NegativeEntryError(MinReflectError):
    """Routing matrix has a negative entry."""


class NonzeroDiagonalError(MinReflectError):
    """Routing matrix has a nonzero diagonal entry."""


class NoConvergenceError(MinReflectError):
    """An iterative method did not reach its tolerance.

    ``diverged`` is True when the iterate norm exceeded the divergence
    bound (for the reflection fixed point this signals an infeasible
    input rather than a tolerance problem).
    """

    def __init__(self, message: str, iterations: int = 0, diverged: bool = False):
        super().__init__(message)
        self.iterations = iterations
        self.diverged = diverged


class NumericalBreakdownError(MinReflectError):
    """The simplex tableau lost numerical meaning (pivots below tolerance)."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class DimensionError(MinReflectError):
    """Operation requires a specific dimension (e.g. two firms)."""


class InvalidPathError(MinReflectError):
    """A driving path violates its construction constraints."""
