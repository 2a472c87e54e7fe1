"""Exception hierarchy shared by all modules."""


class YLDQPTError(Exception):
    """Base class for every error raised by yldqpt."""


class ParameterError(YLDQPTError, ValueError):
    """Invalid physical parameters or a problem size beyond the supported range."""


class NumericalError(YLDQPTError, ArithmeticError):
    """A computation could not be completed in floating point."""


class SingularMatrixError(NumericalError):
    pass


class BranchCutError(NumericalError):
    """An eigenvalue lies on the negative real axis, where the principal log is undefined."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class ConvergenceError(NumericalError):
    """Iteration cap reached; ``best`` carries the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NoZerosError(YLDQPTError, ValueError):
    """The requested quantity only exists when the amplitude has zeros."""
