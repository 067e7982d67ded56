from typing import Any, Tuple

import numpy as np

from .exceptions import DimensionMismatch, InvalidDimension, NonFiniteInput, NotSquare


def as_matrix(value: Any, name: str = "matrix") -> np.ndarray:
    """
    Build an immutable dense float64 matrix.

    Args:
        value: Anything ``numpy.asarray`` accepts; 0-d and 1-d input is rejected.
        name: Operand name used in error messages.

    Returns:
        np.ndarray: A read-only, C-contiguous 2-D copy.
    """
    array = np.array(value, dtype=np.float64, order="C", copy=True)
    if array.ndim != 2:
        raise InvalidDimension(f"{name} must be 2-D, got {array.ndim}-D", details={"shape": list(array.shape)})
    if not np.all(np.isfinite(array)):
        raise NonFiniteInput(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


def as_vector(value: Any, name: str = "vector") -> np.ndarray:
    """Build an immutable dense float64 vector."""
    array = np.array(value, dtype=np.float64, copy=True).reshape(-1)
    if not np.all(np.isfinite(array)):
        raise NonFiniteInput(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


def require_nonempty(a: np.ndarray, name: str = "matrix") -> None:
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidDimension(f"{name} must have at least one row and one column, got {a.shape}")


def require_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"{name} must be square, got {a.shape}")


def require_rows(a: np.ndarray, rows: int, name: str) -> None:
    if a.shape[0] != rows:
        raise DimensionMismatch(f"{name} must have {rows} rows, got {a.shape[0]}")


def require_shape(a: np.ndarray, shape: Tuple[int, int], name: str) -> None:
    if tuple(a.shape) != tuple(shape):
        raise DimensionMismatch(f"{name} must be {shape[0]}x{shape[1]}, got {a.shape[0]}x{a.shape[1]}")

