from .models import CrFactors, PenroseResiduals
from .service import (
    cr_decompose,
    cr_middle_identity_defect,
    penrose_residuals,
    pinv_as_meta,
    pinv_cr_meta,
    pinv_macduffee,
    pinv_via_cr,
)

__all__ = [
    "CrFactors",
    "PenroseResiduals",
    "cr_decompose",
    "cr_middle_identity_defect",
    "penrose_residuals",
    "pinv_as_meta",
    "pinv_cr_meta",
    "pinv_macduffee",
    "pinv_via_cr",
]
