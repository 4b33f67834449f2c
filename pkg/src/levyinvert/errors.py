"""Exception types shared across the package."""


class LevyInvertError(Exception):
    """Base class for all errors raised by this package."""


class CharFnError(LevyInvertError):
    """Invalid characteristic-function parameters or distribution spec."""


class QuadratureError(LevyInvertError):
    """A numerical integration did not reach the requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class UnwrapError(LevyInvertError):
    """Continuous-logarithm construction failed."""

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class InvariantViolation(LevyInvertError):
    """A structural invariant broke during construction.

    Usually means the input is not an infinitely divisible characteristic
    function, or its sigma^2 metadata is wrong.
    """

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class ToleranceError(LevyInvertError):
    """A requested tolerance was not achieved; carries the offending estimate."""

    def __init__(self, message, err_est=None, result=None):
        super().__init__(message)
        self.err_est = err_est
        self.result = result


class ConfigError(LevyInvertError):
    """Malformed run configuration."""
