from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from .utils.validators import as_matrix


class MatrixModel(BaseModel):
    """Base model for frozen domain types that carry dense matrices."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @staticmethod
    def _coerce(value: Any, name: str) -> np.ndarray:
        return as_matrix(value, name)
