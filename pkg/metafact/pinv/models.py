from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..shared.models import MatrixModel


class CrFactors(MatrixModel):
    """A = C R with C the pivot columns of A and R the nonzero rows of rref(A)."""

    c: np.ndarray = Field(..., description="First k independent columns of A, m x k")
    r: np.ndarray = Field(..., description="Nonzero rows of the RREF of A, k x n")
    k: int = Field(..., ge=1, description="Detected rank")
    pivots: Tuple[int, ...] = Field(..., description="Pivot columns, increasing")

    @field_validator("c", "r", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)


class PenroseResiduals(BaseModel):
    """Relative residuals of the four Penrose equations for a candidate X = A^+."""

    axa: float = Field(..., ge=0, description="||A X A - A||_F / ||A||_F")
    xax: float = Field(..., ge=0, description="||X A X - X||_F / ||X||_F")
    ax_symmetric: float = Field(..., ge=0, description="||(A X)^T - A X||_F / ||A X||_F")
    xa_symmetric: float = Field(..., ge=0, description="||(X A)^T - X A||_F / ||X A||_F")
    tolerance: float
    passed: bool

    @property
    def worst(self) -> float:
        return max(self.axa, self.xax, self.ax_symmetric, self.xa_symmetric)
