"""
Unified Settings Configuration
Single source for runtime options: logging, default seeds and the tolerance policy.
"""

import os
from typing import Optional

import numpy as np
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class MetafactSettings(BaseSettings):
    """
    Settings for the meta-factorization toolkit.

    Every field can be overridden from the environment with the ``METAFACT_``
    prefix, e.g. ``METAFACT_SEED=11`` or ``METAFACT_LOG_LEVEL=DEBUG``.
    """

    # ============================================================================
    # PROJECT & ENVIRONMENT CONFIGURATION
    # ============================================================================
    PROJECT_NAME: str = Field(default="metafact")
    VERSION: str = Field(default="1.0.0")
    DESCRIPTION: str = Field(default="Matrix factorizations as solutions of the projector and reconstruction equations")
    ENVIRONMENT: str = Field(default="local")  # local, dev, prod

    # ============================================================================
    # RANDOMNESS
    # ============================================================================
    SEED: int = Field(default=0, ge=0, le=2**64 - 1)
    TRIAL_WORKERS: int = Field(default=4, ge=1)

    # ============================================================================
    # LOGGING CONFIGURATION
    # ============================================================================
    LOG_LEVEL: str = Field(default="WARNING")
    LOG_FILE: Optional[str] = Field(default=None)
    LOG_FORMAT: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    LOG_MAX_SIZE: int = Field(default=10 * 1024 * 1024)  # 10MB
    LOG_BACKUP_COUNT: int = Field(default=5)

    # ============================================================================
    # TOLERANCE POLICY (multiples of machine epsilon unless stated)
    # ============================================================================
    PENROSE_FACTOR: float = Field(default=256.0, gt=0)
    WEDDERBURN_TOL_FACTOR: float = Field(default=1024.0, gt=0)
    CONSISTENCY_RTOL: float = Field(default=1e-8, gt=0)
    VERIFY_RTOL: float = Field(default=1e-8, gt=0)
    RANK_REDUCTION_RTOL: float = Field(default=1e-8, gt=0)
    VALIDATE_BASES: bool = Field(default=False)

    # ============================================================================
    # I/O LIMITS
    # ============================================================================
    MAX_DENSE_ENTRIES: int = Field(default=4_000_000, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="METAFACT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    @property
    def is_production(self) -> bool:
        return self.ENVIRONMENT == "prod"

    @property
    def log_file_path(self) -> Optional[str]:
        """Get log file path with directory creation"""
        if not self.LOG_FILE:
            return None
        log_dir = os.path.dirname(self.LOG_FILE)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        return self.LOG_FILE


class Tolerances:
    """Centralized tolerance policy. All checks are relative Frobenius-norm checks."""

    eps: float = float(np.finfo(np.float64).eps)

    @classmethod
    def rank_rtol(cls, m: int, n: int) -> float:
        """Default relative cut-off for numerical rank and pseudoinverse."""
        return max(m, n, 1) * cls.eps

    @classmethod
    def penrose_tol(cls, m: int, n: int) -> float:
        return settings.PENROSE_FACTOR * max(m, n, 1) * cls.eps


# ============================================================================
# GLOBAL SETTINGS INSTANCE
# ============================================================================
settings = MetafactSettings()
