"""Exception types raised by nhtwist."""


class NHTwistError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NHTwistError, ValueError):
    """Invalid deformation, model or run configuration."""


class EvaluationError(NHTwistError, ArithmeticError):
    """An observable or right-hand side produced a non-finite value."""


class IntegrationError(NHTwistError, ArithmeticError):
    """Integration aborted because the state stopped being finite.

    Attributes
    ----------
    t : float
        Time of the step at which the blow-up was detected.
    """

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t
