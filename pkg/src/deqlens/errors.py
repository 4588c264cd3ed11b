"""Exception types raised across the package."""


class DeqlensError(Exception):
    """Base class for every error this package raises on purpose."""


class MatrixError(DeqlensError, ValueError):
    pass


class DuplicateEntry(MatrixError):
    pass


class IndexOutOfRange(MatrixError):
    pass


class NonFiniteValue(MatrixError):
    pass


class NotHermitian(MatrixError):
    """Raised with the worst offending (row, col) pair and its deviation."""

    def __init__(self, message, pair=None, deviation=None):
        super().__init__(message)
        self.pair = pair
        self.deviation = deviation


class ComplexPowerUndefined(MatrixError):
    pass


class POutOfRange(DeqlensError, ValueError):
    pass


class ConjugateExponentMismatch(DeqlensError, ValueError):
    pass


class HypothesisViolated(DeqlensError):
    pass


class ConvergenceFailure(DeqlensError, ArithmeticError):
    def __init__(self, message, off_diagonal_mass=None):
        super().__init__(message)
        self.off_diagonal_mass = off_diagonal_mass


class NotSparseAccess(DeqlensError):
    pass


class DomainError(DeqlensError, ValueError):
    pass


class MatrixMarketError(DeqlensError, ValueError):
    """Parse failure; ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
