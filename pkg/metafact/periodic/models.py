import math
from enum import Enum
from typing import Dict, List

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..shared.models import MatrixModel
from ..shared.utils.exceptions import InvalidPeriod
from ..shared.utils.helpers import fro_norm

PERIOD_TOL = 1e-10


class GeneratorKind(str, Enum):
    SHIFT = "shift"
    ROTATION = "rotation"


class PeriodicGenerators(MatrixModel):
    """Generators z_c, z_r of order dividing N: z^N = I_k."""

    z_c: np.ndarray = Field(..., description="Column-side generator, k x k")
    z_r: np.ndarray = Field(..., description="Row-side generator, k x k")
    n_period: int = Field(..., ge=1, description="Period N")

    @field_validator("z_c", "z_r", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @model_validator(mode="after")
    def _validate_period(self):
        k = self.z_c.shape[0]
        for name, z in (("z_c", self.z_c), ("z_r", self.z_r)):
            if z.shape != (k, k):
                raise InvalidPeriod(f"{name} must be {k}x{k}, got {z.shape[0]}x{z.shape[1]}")
            defect = fro_norm(np.linalg.matrix_power(z, self.n_period) - np.eye(k))
            if defect > PERIOD_TOL * math.sqrt(k):
                raise InvalidPeriod(
                    f"{name}^{self.n_period} differs from the identity by {defect:.3e}",
                    details={"generator": name, "n_period": self.n_period, "defect": defect},
                )
        return self

    @property
    def k(self) -> int:
        return self.z_c.shape[0]


class PeriodicityReport(BaseModel):
    """Residuals of (F Y^T)^q A (X H^T)^q against A for q = 0 .. N * p_max."""

    n_period: int = Field(..., ge=1)
    p_max: int = Field(..., ge=0)
    periodic_residuals: List[float] = Field(..., description="Residual at q = N p for p = 0 .. p_max")
    intermediate_residuals: Dict[int, float] = Field(default_factory=dict, description="Residual at powers q not divisible by N")
    tolerance: float
    passed: bool


class ProjectorPowerDefects(BaseModel):
    """||(F Y^T)^N - F F^+|| and ||(X H^T)^N - (H^T)^+ H^T||, relative."""

    column: float = Field(..., ge=0)
    row: float = Field(..., ge=0)
