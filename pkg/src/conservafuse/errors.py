"""Exception hierarchy.

Two families: ``ValidationError`` for bad inputs (CLI exit code 2) and
``DegeneracyError`` for numerically singular problems (CLI exit code 3).
"""


class FusionError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(FusionError, ValueError):
    pass


class DegeneracyError(FusionError, ArithmeticError):
    pass


class NotSquare(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotPositiveSemiDefinite(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionNotTwo(ValidationError):
    pass


class GainConstraintViolated(ValidationError):
    pass


class OmegaOutOfRange(ValidationError):
    pass


class ParameterOutOfRange(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class ZeroDirection(ValidationError):
    pass


class WrongCase(ValidationError):
    pass


class UnknownCost(ValidationError):
    pass


class SingularMatrix(DegeneracyError):
    pass


class SingularR(DegeneracyError):
    pass


class SingularCovariance(DegeneracyError):
    pass


class DegenerateSplit(DegeneracyError):
    pass


class DegenerateDenominator(DegeneracyError):
    pass


class NonFiniteCost(DegeneracyError):
    pass
