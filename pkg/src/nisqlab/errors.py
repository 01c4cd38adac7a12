"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes are inconsistent (non-square, mismatched, out of range)."""


class SizeCapError(ValueError):
    """Requested problem size exceeds the hard cap of an exact algorithm."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (e.g. rows not orthonormal)."""


class UndefinedStatisticError(ArithmeticError):
    """A statistic is undefined on the given data (e.g. zero variance)."""


class ConfigError(ValueError):
    """An experiment configuration is malformed; message names the field."""
