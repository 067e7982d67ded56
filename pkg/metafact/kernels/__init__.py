from .dense import Side, Uplo, lu, lu_solve, numerical_rank, pinv, qr, require_rank, rref, solve_triangular, svd
from .models import LuFactors, QrFactors, SvdFactors

__all__ = [
    "LuFactors",
    "QrFactors",
    "Side",
    "SvdFactors",
    "Uplo",
    "lu",
    "lu_solve",
    "numerical_rank",
    "pinv",
    "qr",
    "require_rank",
    "rref",
    "solve_triangular",
    "svd",
]
