import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..config.settings import settings
from ..shared.models import MatrixModel
from ..shared.utils.exceptions import DimensionMismatch, NotFullRank


class BasisPair(MatrixModel):
    """
    Column-space basis f (m x k) and row-space basis h (n x k).

    The widths only differ for the pseudoinverse meta-factorization, where
    f = A and h = A^T.
    """

    f: np.ndarray = Field(..., description="Column-space basis, m x k")
    h: np.ndarray = Field(..., description="Row-space basis, n x k")
    check_rank: Optional[bool] = Field(default=None, exclude=True, description="Override VALIDATE_BASES")

    @field_validator("f", "h", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @model_validator(mode="after")
    def _validate_rank(self):
        enabled = settings.VALIDATE_BASES if self.check_rank is None else self.check_rank
        if enabled:
            from ..kernels.dense import numerical_rank

            for name, basis in (("f", self.f), ("h", self.h)):
                rank = numerical_rank(basis) if basis.size else 0
                if rank != basis.shape[1]:
                    raise NotFullRank(
                        f"basis {name} has numerical rank {rank}, expected {basis.shape[1]}",
                        details={"basis": name, "rank": rank, "width": basis.shape[1]},
                    )
        return self

    @property
    def m(self) -> int:
        return self.f.shape[0]

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @property
    def k(self) -> int:
        return self.f.shape[1]

    @property
    def k_row(self) -> int:
        return self.h.shape[1]


class SketchPair(MatrixModel):
    """Left anchor b (m x p) and right anchor d (n x q) of the projector solution."""

    b: np.ndarray = Field(..., description="Left anchor, m x p, p >= k")
    d: np.ndarray = Field(..., description="Right anchor, n x q, q >= k")

    @field_validator("b", "d", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)


class ProjectorPair(MatrixModel):
    """Solutions (y, x) of the projector equation with the induced P = f y^T and R = x h^T."""

    y: np.ndarray = Field(..., description="Output basis, m x k")
    x: np.ndarray = Field(..., description="Input basis, n x k")
    k: int = Field(..., ge=0, description="Rank of the projectors")
    p: Optional[np.ndarray] = Field(default=None, description="Column-space projector f y^T")
    r: Optional[np.ndarray] = Field(default=None, description="Row-space projector x h^T")

    @field_validator("y", "x", mode="before")
    @classmethod
    def _matrix(cls, value, info):
        return cls._coerce(value, info.field_name)

    @field_validator("p", "r", mode="before")
    @classmethod
    def _optional_matrix(cls, value, info):
        return None if value is None else cls._coerce(value, info.field_name)

    @model_validator(mode="after")
    def _validate_width(self):
        if self.y.shape[1] != self.k:
            raise DimensionMismatch(f"y has {self.y.shape[1]} columns, expected k={self.k}")
        return self


class FactorReport(BaseModel):
    """Verification record attached to every factorization."""

    residual_rel: float = Field(0.0, description="||A - F G H^T||_F / ||A||_F")
    idem_defect_p: float = Field(0.0, description="||P^2 - P||_F / ||P||_F")
    idem_defect_r: float = Field(0.0, description="||R^2 - R||_F / ||R||_F")
    detected_rank: int = Field(0, ge=0, description="Numerical rank of the mixing matrix")
    elapsed_seconds: float = Field(0.0, description="Wall-clock time of the construction")
    rank_p: Optional[int] = Field(None, ge=0, description="Numerical rank of P")
    rank_r: Optional[int] = Field(None, ge=0, description="Numerical rank of R")
    projector_defect: Optional[float] = Field(None, description="max(||Y^T F - I||_F, ||H^T X - I||_F)")
    tolerance: Optional[float] = Field(None, description="Tolerance the defects were judged against")
    within_tolerance: Optional[bool] = Field(None, description="Whether both defects are within tolerance")
    seed: Optional[int] = Field(None, ge=0, description="Seed of the random draws, if any")

    @field_validator("residual_rel", "idem_defect_p", "idem_defect_r", "elapsed_seconds", "projector_defect", "tolerance")
    @classmethod
    def _finite_non_negative(cls, value, info):
        if value is None:
            return value
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"{info.field_name} must be finite and non-negative, got {value}")
        return float(value)


class MetaFactorization(MatrixModel):
    """The triple (F, G, H) with A ~ F G H^T and its verification report."""

    basis: BasisPair
    g: np.ndarray = Field(..., description="Mixing matrix, k x k")
    k: int = Field(..., ge=0, description="Rank of the factorization")
    report: FactorReport
    projectors: Optional[ProjectorPair] = Field(default=None, description="Projector-equation solutions used")
    method: Optional[str] = Field(default=None, description="Construction that produced the factors")

    @field_validator("g", mode="before")
    @classmethod
    def _matrix(cls, value):
        return cls._coerce(value, "g")

    @model_validator(mode="after")
    def _validate_shapes(self):
        if self.g.shape != (self.basis.f.shape[1], self.basis.h.shape[1]):
            raise DimensionMismatch(
                f"g is {self.g.shape}, expected {(self.basis.f.shape[1], self.basis.h.shape[1])}"
            )
        return self

    @property
    def f(self) -> np.ndarray:
        return self.basis.f

    @property
    def h(self) -> np.ndarray:
        return self.basis.h

    def reconstruction(self) -> np.ndarray:
        return (self.basis.f @ self.g) @ self.basis.h.T
