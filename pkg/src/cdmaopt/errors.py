"""Exception types raised by the library."""


class CdmaError(ValueError):
    pass


class ZeroVector(CdmaError):
    pass


class CountOutOfRange(CdmaError):
    pass


class DimensionMismatch(CdmaError):
    pass


class IndexOutOfRange(CdmaError):
    pass


class NotHermitian(CdmaError):
    pass


class TauOutOfRange(CdmaError):
    pass


class NoConvergence(ArithmeticError):
    """Eigen solve did not reach the residual bound."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual
