"""Exception types shared across the package."""


class HipwmError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(HipwmError, ValueError):
    """A physical or numerical parameter is outside its valid range."""


class NumericFailureError(HipwmError, ArithmeticError):
    """A numerical procedure could not produce a result (bracket or root failure)."""


class ConfigError(HipwmError):
    """A run configuration could not be parsed or validated."""
