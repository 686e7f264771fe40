class IsodensityError(Exception):
    """Base class for all errors raised by the package."""


class PreconditionError(IsodensityError, ValueError):
    pass


class DivergenceError(IsodensityError, ValueError):
    """A weighted integral is infinite for the requested exponent."""


class TruncationError(IsodensityError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(IsodensityError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegeneracyError(IsodensityError):
    pass


class NotFoundError(IsodensityError):
    pass
