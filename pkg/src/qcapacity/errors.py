"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An input violates an operation's precondition."""


class DomainError(InvalidArgumentError):
    """A spectral function is undefined at some eigenvalue of its argument."""

    def __init__(self, message: str, eigenvalue: float):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NumericalFailureError(ArithmeticError):
    """An iterative routine did not converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
