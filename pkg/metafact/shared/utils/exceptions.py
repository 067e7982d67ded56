"""
Custom exceptions for the meta-factorization toolkit.

Every exception carries a machine-readable ``error_code`` (its kind) and the
CLI exit code it maps to.
"""

from typing import Any, Dict, Optional


class MetafactError(Exception):
    """Base exception for metafact errors."""

    exit_code: int = 2

    def __init__(self, message: str, error_code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.error_code = error_code or type(self).__name__
        self.details = details or {}
        super().__init__(self.message)

    @property
    def kind(self) -> str:
        return self.error_code

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "message": self.message, "details": self.details}


# Validation errors (exit code 2)

class MetafactValidationError(MetafactError):
    """Raised when inputs violate a precondition."""

    exit_code = 2


class InvalidDimension(MetafactValidationError):
    """Raised when a matrix has a zero or otherwise unusable dimension."""
    pass


class DimensionMismatch(MetafactValidationError):
    """Raised when operand shapes are not conformant."""
    pass


class NotSquare(MetafactValidationError):
    """Raised when a square matrix is required."""
    pass


class NonFiniteInput(MetafactValidationError):
    """Raised when a matrix contains NaN or Inf."""
    pass


class RankTooLarge(MetafactValidationError):
    """Raised when the requested rank exceeds the numerical rank."""
    pass


class IndexOutOfRange(MetafactValidationError):
    """Raised when a row or column index is outside the matrix."""
    pass


class DuplicateIndex(MetafactValidationError):
    """Raised when an index set repeats an entry."""
    pass


class InvalidSpec(MetafactValidationError):
    """Raised when a synthetic matrix spec cannot be honoured."""
    pass


class InvalidSketch(MetafactValidationError):
    """Raised when a sketch configuration does not fit the matrix."""
    pass


class InvalidPeriod(MetafactValidationError):
    """Raised when a periodic generator does not satisfy Z^N = I."""
    pass


class UnsupportedFormat(MetafactValidationError):
    """Raised for Matrix Market headers outside the supported subset."""
    pass


class MatrixTooLarge(MetafactValidationError):
    """Raised when a dense matrix would exceed the configured entry limit."""
    pass


class ZeroMatrix(MetafactValidationError):
    """Raised when an operation needs a nonzero matrix."""
    pass


class InconsistentSystem(MetafactValidationError):
    """Raised when the right-hand side is not in the column space."""
    pass


class UsageError(MetafactValidationError):
    """Raised when command-line arguments are invalid."""
    pass


class ParseError(MetafactValidationError):
    """Raised when a matrix file cannot be parsed."""

    def __init__(
        self, message: str, line: Optional[int] = None, path: Optional[str] = None, offset: Optional[int] = None
    ):
        self.line = line
        self.path = path
        self.offset = offset
        prefix = f"{path}:" if path else ""
        location = f"line {line}: " if line is not None else ""
        details = {"line": line, "path": path}
        if offset is not None:
            details["offset"] = offset
        super().__init__(f"{prefix}{location}{message}", details=details)


# Numerical breakdown (exit code 3)

class NumericalBreakdown(MetafactError):
    """Raised when a computation breaks down numerically."""

    exit_code = 3


class SingularTriangular(NumericalBreakdown):
    """Raised when a triangular factor has a (numerically) zero diagonal entry."""
    pass


class RankDeficientAnchor(NumericalBreakdown):
    """Raised when B^T F or H^T D loses rank."""
    pass


class PivotBreakdown(NumericalBreakdown):
    """Raised when the rank-one reduction finds no admissible pivot."""
    pass


class SingularMiddle(NumericalBreakdown):
    """Raised when the middle matrix of an explicit pseudoinverse formula is singular."""
    pass


class SingularMixing(NumericalBreakdown):
    """Raised when a mixing matrix that must be inverted is singular."""
    pass


class NotFullRank(NumericalBreakdown):
    """Raised when a full-rank factorization is not full rank."""
    pass
