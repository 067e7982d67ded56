from enum import Enum
from typing import Dict, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..core.models import FactorReport
from ..shared.models import MatrixModel
from ..shared.utils.helpers import fro_norm, relative_residual
from ..shared.utils.validators import as_matrix


class UtvVariant(str, Enum):
    ROW_SVD = "row-svd"
    TWO_SIDED_SVD = "two-sided-svd"
    TWO_SIDED_QR = "two-sided-qr"
    TWO_SIDED_LU = "two-sided-lu"


class TStructure(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


# (u has orthonormal columns, v has orthonormal columns) as guaranteed by each construction
ORTHONORMAL_CLAIMS: Dict[UtvVariant, Tuple[bool, bool]] = {
    UtvVariant.ROW_SVD: (True, True),
    UtvVariant.TWO_SIDED_SVD: (False, True),
    UtvVariant.TWO_SIDED_QR: (True, True),
    UtvVariant.TWO_SIDED_LU: (True, False),
}


class UtvFactors(MatrixModel):
    """A ~ U T V^T with T triangular (upper or lower) with exact structural zeros."""

    u: np.ndarray = Field(..., description="Left factor, m x k")
    t: np.ndarray = Field(..., description="Triangular middle factor")
    v: np.ndarray = Field(..., description="Right factor, n x k or n x n")
    variant: UtvVariant
    structure: TStructure
    k: int = Field(..., ge=1)
    report: FactorReport

    @field_validator("u", "t", "v", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @model_validator(mode="after")
    def _validate_structure(self):
        if self.u.shape[1] != self.t.shape[0] or self.t.shape[1] != self.v.shape[1]:
            raise ValueError(f"u {self.u.shape}, t {self.t.shape} and v {self.v.shape} are not conformant")
        if self.structure == TStructure.UPPER:
            off = self.t[np.tril_indices(self.t.shape[0], -1, self.t.shape[1])]
        else:
            off = self.t[np.triu_indices(self.t.shape[0], 1, self.t.shape[1])]
        if np.any(off != 0.0):
            raise ValueError(f"t is not exactly {self.structure.value} triangular")
        return self

    def reconstruction(self) -> np.ndarray:
        return (self.u @ self.t) @ self.v.T

    def residual_rel(self, a) -> float:
        return relative_residual(as_matrix(a, "a"), self.reconstruction())

    def orthonormality_defects(self) -> Dict[str, float]:
        """||U^T U - I||_F and ||V^T V - I||_F."""
        return {
            "u": fro_norm(self.u.T @ self.u - np.eye(self.u.shape[1])),
            "v": fro_norm(self.v.T @ self.v - np.eye(self.v.shape[1])),
        }

    @property
    def claims(self) -> Tuple[bool, bool]:
        return ORTHONORMAL_CLAIMS[self.variant]
