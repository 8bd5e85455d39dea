"""
Exception hierarchy for trace-rearrange.

Every failure the library raises on purpose derives from TraceRearrangeError,
so the CLI can map them all to the configuration/validation exit code.
"""


class TraceRearrangeError(Exception):
    """Base class for all library errors."""


class ValidationError(TraceRearrangeError, ValueError):
    """Input rejected before any numerics ran."""


class NumericalError(TraceRearrangeError, ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""


# Input validation

class MatrixFormatError(ValidationError):
    """Matrix or vector data is malformed (shape, finiteness, JSON layout)."""


class NotHermitian(ValidationError):
    """Matrix deviates from its adjoint beyond tolerance."""


class NegativeEigenvalue(ValidationError):
    """PSD input has an eigenvalue below the clamp threshold."""


class BadExponent(ValidationError):
    """Exponent (p, q, r, s) outside the supported domain."""


class NonIntegerS(ValidationError):
    """An integer exponent was required."""


class LengthMismatch(ValidationError):
    """Vectors of different lengths."""


class DimMismatch(ValidationError):
    """Matrices of different dimensions."""


class DomainError(ValidationError):
    """Scalar argument outside its domain."""


class PreconditionViolated(ValidationError):
    """An ordering hypothesis (A >= B >= 0, A >= |B|) does not hold."""


class SingularShift(ValidationError):
    """A shifted matrix t + A +/- B is not positive definite."""


class SingularMatrix(ValidationError):
    """A strictly positive definite matrix was required."""


class BadSpec(ValidationError):
    """Ensemble specification is invalid."""


class IncompatibleEnsemble(ValidationError):
    """Ensemble kind does not satisfy the checker's hypotheses."""


class UnknownInequality(ValidationError):
    """Inequality id not present in the registry."""


class CorruptWitness(ValidationError):
    """Serialized witness does not match its recorded structure."""


class ConfigError(ValidationError):
    """Configuration file or flag values are invalid."""


# Numerical failures

class ConvergenceFailure(NumericalError):
    """The eigensolver or SVD did not converge."""


class TruncationError(NumericalError):
    """Quadrature tail estimate exceeds the requested accuracy."""


class ReplayMismatch(NumericalError):
    """A stored witness re-evaluates to a different slack."""
