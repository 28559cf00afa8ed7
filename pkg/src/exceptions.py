"""Exception hierarchy shared by every module.

Input problems derive from ValueError, numerical breakdowns from ArithmeticError,
so the CLI can map them onto distinct exit codes.
"""


class NonstatError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(NonstatError, ValueError):
    """Caller supplied arguments that violate a precondition."""


class NumericalError(NonstatError, ArithmeticError):
    """A computation hit a singular or degenerate quantity."""


class TooFewSamples(InvalidInputError):
    """Not enough samples for the requested epoch structure."""


class DimensionMismatch(InvalidInputError):
    """Operands have incompatible dimensions."""


class InvalidDimension(InvalidInputError):
    """Requested subspace dimension is out of range."""


class InvalidArgument(InvalidInputError):
    """Generic out-of-range argument."""


class InvalidK(InvalidInputError):
    """Cluster count is out of range."""


class DomainError(InvalidInputError):
    """Argument lies outside the mathematical domain of a function."""


class ZeroVector(InvalidInputError):
    """A direction vector has zero norm."""


class InvalidVariantParams(InvalidInputError):
    """Synthetic data variant parameters are out of range."""


class NoTrueBoundaries(InvalidInputError):
    """ROC evaluation needs at least one true change point."""


class SingularCovariance(NumericalError):
    """A covariance matrix is rank-deficient beyond tolerance."""


class DegenerateVariance(NumericalError):
    """A variance is (numerically) zero."""


class DegenerateSeparation(NumericalError):
    """Class means coincide, so no discriminant direction exists."""
