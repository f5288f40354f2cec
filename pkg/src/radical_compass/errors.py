"""Exception hierarchy shared by all engines."""


class CompassError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(CompassError, ValueError):
    """Invalid physical configuration or config-file content.

    ``key`` names the offending configuration key when one is known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ContractError(CompassError, ValueError):
    """An operand violates a documented invariant (Hermiticity, trace, ...)."""


class UnsupportedRegimeError(CompassError):
    """The requested method does not apply to these parameters."""


class IntegrationError(CompassError, RuntimeError):
    """A propagation or quadrature failed to converge.

    ``residual`` carries the last achieved max-norm change.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UnstableDerivativeError(CompassError, ArithmeticError):
    """Finite-difference derivative failed its step-halving consistency check."""


class DomainError(CompassError, ValueError):
    """Inputs outside the domain of a closed-form expression."""


class ScenarioError(CompassError):
    """An engine failure inside a sweep; ``point`` identifies where."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
