from .models import ORTHONORMAL_CLAIMS, TStructure, UtvFactors, UtvVariant
from .service import (
    UTV_BUILDERS,
    cpqr_bases,
    cpqr_mixing,
    svd_via_meta,
    two_sided_bases,
    utv,
    utv_row_svd,
    utv_two_sided_lu,
    utv_two_sided_qr,
    utv_two_sided_svd,
)

__all__ = [
    "ORTHONORMAL_CLAIMS",
    "TStructure",
    "UTV_BUILDERS",
    "UtvFactors",
    "UtvVariant",
    "cpqr_bases",
    "cpqr_mixing",
    "svd_via_meta",
    "two_sided_bases",
    "utv",
    "utv_row_svd",
    "utv_two_sided_lu",
    "utv_two_sided_qr",
    "utv_two_sided_svd",
]
