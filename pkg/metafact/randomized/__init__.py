from .cur import cur, cur_random_naive
from .models import CurFactors, CurMode, RankReductionReport, SketchConfig, WedderburnStep
from .nystrom import generalized_nystrom, nystrom_projectors, nystrom_unstable
from .sketching import draw_sketches, truncated_svd_residual
from .wedderburn import default_pivot_tol, verify_rank_reduction_conditions, wedderburn_reduce

__all__ = [
    "CurFactors",
    "CurMode",
    "RankReductionReport",
    "SketchConfig",
    "WedderburnStep",
    "cur",
    "cur_random_naive",
    "default_pivot_tol",
    "draw_sketches",
    "generalized_nystrom",
    "nystrom_projectors",
    "nystrom_unstable",
    "truncated_svd_residual",
    "verify_rank_reduction_conditions",
    "wedderburn_reduce",
]
