import math
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from ..config.settings import settings


class MethodRecord(BaseModel):
    """Outcome of one construction (one trial for randomized methods)."""

    method: str = Field(..., description="Construction name as given on the command line")
    k: int = Field(..., ge=0, description="Rank of the factorization")
    residual_rel: float = Field(..., description="||A - approximation||_F / ||A||_F")
    elapsed_seconds: float = Field(0.0, description="Wall-clock time, excluded from golden comparisons")
    idem_defect_p: Optional[float] = None
    idem_defect_r: Optional[float] = None
    detected_rank: Optional[int] = None
    structural_checks_passed: Optional[bool] = None
    trial: Optional[int] = None
    seed: Optional[int] = None
    oversample: Optional[int] = None
    mode: Optional[str] = None
    deviation: Optional[float] = Field(None, description="||G - I_k||_F for cpqr")
    steps: Optional[int] = Field(None, description="Wedderburn deflation steps")
    pivots: Optional[List[Tuple[int, int]]] = None
    orthonormality: Optional[Dict[str, float]] = None
    row_idx: Optional[List[int]] = None
    col_idx: Optional[List[int]] = None

    @field_validator("residual_rel", "elapsed_seconds", "idem_defect_p", "idem_defect_r", "deviation")
    @classmethod
    def _finite(cls, value, info):
        if value is not None and not math.isfinite(value):
            raise ValueError(f"{info.field_name} must be finite, got {value}")
        return value


class AggregateStats(BaseModel):
    count: int = Field(..., ge=1)
    median_residual: float
    min_residual: float
    max_residual: float


class CheckRecord(BaseModel):
    """One verification check: the measured defect against its threshold."""

    name: str
    measured: float = Field(..., ge=0)
    threshold: float = Field(..., ge=0)
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    """The single JSON document a command prints on success."""

    success: bool = True
    command: str = Field(..., description="Subcommand that produced the report")
    argv: List[str] = Field(default_factory=list, description="Arguments echoed back")
    input: str = Field(..., description="Input path or canonical synthetic spec")
    shape: Tuple[int, int]
    seed: Optional[int] = None
    version: str = Field(default_factory=lambda: settings.VERSION)
    methods: List[MethodRecord] = Field(default_factory=list)
    aggregate: Optional[AggregateStats] = None
    baseline_residual: Optional[float] = Field(None, description="Truncated-SVD residual for the same rank")
    checks: List[CheckRecord] = Field(default_factory=list)
    passed: Optional[bool] = Field(None, description="All checks passed (verify only)")
    factors_dir: Optional[str] = None


class ErrorInfo(BaseModel):
    kind: str
    message: str
    details: Dict[str, Any] = Field(default_factory=dict)


class ErrorResponse(BaseModel):
    success: bool = False
    error: ErrorInfo
    version: str = Field(default_factory=lambda: settings.VERSION)
