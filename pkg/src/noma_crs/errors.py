"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class UnsupportedProtocolError(ValueError):
    """The operation is undefined for the given EH protocol."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual error estimate {residual:.3e})")
        self.residual = residual
