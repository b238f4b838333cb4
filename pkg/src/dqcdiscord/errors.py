"""Exception hierarchy shared by every module."""


class DiscordError(Exception):
    """Base class for all errors raised by the package."""


class ValidationError(DiscordError, ValueError):
    """An argument violates a documented precondition."""


class DimensionError(ValidationError):
    """A matrix would exceed the configured maximum dimension."""


class NumericError(DiscordError, ArithmeticError):
    """A numerical tolerance check failed (non-unitary, non-Hermitian, ...)."""
