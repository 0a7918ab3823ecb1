"""Exception types raised across the package."""


class WdcError(Exception):
    """Base class for all package errors."""


class DomainError(WdcError, ValueError):
    """A point was supplied outside the open unit disk."""


class WeightError(WdcError, ValueError):
    """A weight evaluated to a non-positive value."""


class SelfMapViolation(WdcError):
    """A symbol tagged as a self-map leaves the disk on the validation grid."""

    def __init__(self, message, witness=None, max_modulus=None):
        super().__init__(message)
        self.witness = witness
        self.max_modulus = max_modulus


class TruncationError(WdcError):
    """A power series cannot be truncated to the requested accuracy."""


class NumericalError(WdcError):
    """An evaluator produced NaN or otherwise unusable values."""


class ConfigError(WdcError, ValueError):
    """A run configuration or symbol expression could not be parsed."""
