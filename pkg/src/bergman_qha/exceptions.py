"""Exception types raised by the numerical routines."""


class DegenerateInputError(ArithmeticError):
    """A Möbius denominator vanished; only possible for invalid group elements."""


class IntegrationError(ArithmeticError):
    """An integrand returned a non-finite value at a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NumericalError(ArithmeticError):
    """A dense linear-algebra kernel (SVD) failed to converge."""
