from typing import Tuple

import numpy as np
from pydantic import Field, field_validator

from ..shared.models import MatrixModel
from ..shared.utils.validators import as_vector


class QrFactors(MatrixModel):
    """Householder QR factors with optional column pivoting: a[:, perm] = q @ r."""

    q: np.ndarray = Field(..., description="Orthonormal columns, m x min(m,n) (m x m in full mode)")
    r: np.ndarray = Field(..., description="Upper triangular/trapezoidal factor with hard zeros")
    perm: Tuple[int, ...] = Field(..., description="Column permutation, identity without pivoting")

    @field_validator("q", "r", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @property
    def permutation_matrix(self) -> np.ndarray:
        """Pi with a @ Pi = q @ r."""
        n = len(self.perm)
        return np.eye(n)[:, list(self.perm)]


class SvdFactors(MatrixModel):
    """Reduced SVD: a = u @ diag(s) @ v.T with p = min(m, n)."""

    u: np.ndarray = Field(..., description="Left singular vectors, m x p")
    s: np.ndarray = Field(..., description="Singular values, non-increasing")
    v: np.ndarray = Field(..., description="Right singular vectors, n x p")

    @field_validator("u", "v", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @field_validator("s", mode="before")
    @classmethod
    def _values(cls, value):
        return as_vector(value, "s")

    def rank(self, rtol: float) -> int:
        if self.s.size == 0 or self.s[0] == 0.0:
            return 0
        return int(np.count_nonzero(self.s > rtol * self.s[0]))


class LuFactors(MatrixModel):
    """Partially pivoted LU of a square matrix: a[perm, :] = l @ u."""

    l: np.ndarray = Field(..., description="Unit lower triangular factor")
    u: np.ndarray = Field(..., description="Upper triangular factor")
    perm: Tuple[int, ...] = Field(..., description="Row permutation")

    @field_validator("l", "u", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @property
    def permutation_matrix(self) -> np.ndarray:
        """P with P @ a = l @ u."""
        k = len(self.perm)
        return np.eye(k)[list(self.perm), :]
