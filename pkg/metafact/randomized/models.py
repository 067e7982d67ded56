from enum import Enum
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..config.settings import settings
from ..core.models import FactorReport
from ..shared.models import MatrixModel
from ..shared.utils.exceptions import InvalidSketch
from ..shared.utils.helpers import relative_residual
from ..shared.utils.validators import as_matrix, as_vector


class SketchConfig(BaseModel):
    """Gaussian sketch sizes for the generalized Nystrom method."""

    k: int = Field(..., ge=1, description="Target rank, width of the column sketch")
    oversample_rows: Optional[int] = Field(default=None, ge=0, description="Extra row-sketch columns, default k")
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0, lt=2**64, description="64-bit RNG seed")
    distribution: Literal["gaussian"] = "gaussian"

    @property
    def row_width(self) -> int:
        return self.k + (self.k if self.oversample_rows is None else self.oversample_rows)

    def check(self, m: int, n: int) -> None:
        """Raise InvalidSketch unless the sketches fit an m x n matrix."""
        if self.k > n:
            raise InvalidSketch(f"column sketch width k={self.k} exceeds n={n}", details={"k": self.k, "n": n})
        if self.row_width > m:
            raise InvalidSketch(
                f"row sketch width {self.row_width} exceeds m={m}; lower the oversampling",
                details={"width": self.row_width, "m": m},
            )


class CurMode(str, Enum):
    ORTHOGONAL = "orthogonal"
    INTERPOLATIVE = "interpolative"


class CurFactors(MatrixModel):
    """A ~ C U R with C = A(:, J) and R = A(I, :) copied verbatim."""

    c: np.ndarray = Field(..., description="Selected columns, m x k")
    u_mix: np.ndarray = Field(..., description="Mixing matrix, k x k")
    r: np.ndarray = Field(..., description="Selected rows, k x n")
    col_idx: Tuple[int, ...]
    row_idx: Tuple[int, ...]
    mode: CurMode
    report: Optional[FactorReport] = None

    @field_validator("c", "u_mix", "r", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @property
    def k(self) -> int:
        return len(self.col_idx)

    def reconstruction(self) -> np.ndarray:
        return (self.c @ self.u_mix) @ self.r

    def residual_rel(self, a) -> float:
        return relative_residual(as_matrix(a, "a"), self.reconstruction())


class WedderburnStep(MatrixModel):
    """One rank-one deflation A_{r+1} = A_r - A_r u v^T A_r / g."""

    u: np.ndarray = Field(..., description="Right direction, length n")
    v: np.ndarray = Field(..., description="Left direction, length m")
    g: float = Field(..., description="v^T A_r u, nonzero")
    pivot: Optional[Tuple[int, int]] = Field(default=None, description="(row, col) for the default pivot rule")

    @field_validator("u", "v", mode="before")
    @classmethod
    def _vector(cls, value, info):
        return as_vector(value, info.field_name)

    @model_validator(mode="after")
    def _nonzero(self):
        if self.g == 0.0:
            raise ValueError("rank-one reduction needs a nonzero g")
        return self


class RankReductionReport(BaseModel):
    """Whether (F, G, H) arises from A through F = A W_c, G^-1 = W_r^T A W_c, H = A^T W_r."""

    column_residual: float = Field(..., ge=0, description="||A W_c - F||_F / ||F||_F")
    mixing_residual: float = Field(..., ge=0, description="||W_r^T A W_c - G^-1||_F / ||G^-1||_F")
    row_residual: float = Field(..., ge=0, description="||A^T W_r - H||_F / ||H||_F")
    rank_a: int = Field(..., ge=0)
    rank_fgh: int = Field(..., ge=0)
    rank_remainder: int = Field(..., ge=0)
    tolerance: float
    conditions_hold: bool
    rank_identity_holds: bool
    holds: bool
