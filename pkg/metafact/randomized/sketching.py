from typing import Tuple

import numpy as np

from ..kernels.dense import svd
from ..shared.utils.validators import as_matrix, require_nonempty
from .models import SketchConfig


def draw_sketches(cfg: SketchConfig, m: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gaussian sketches (omega_c n x k, omega_r m x row_width) from one PCG64 stream.

    omega_c is drawn first, so a seed fixes both matrices bit for bit.
    """
    cfg.check(m, n)
    rng = np.random.default_rng(cfg.seed)
    omega_c = rng.standard_normal((n, cfg.k))
    omega_r = rng.standard_normal((m, cfg.row_width))
    return as_matrix(omega_c, "omega_c"), as_matrix(omega_r, "omega_r")


def truncated_svd_residual(a, k: int) -> float:
    """Relative Frobenius error of the best rank-k approximation."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    s = svd(a).s
    total = float(np.sqrt(np.sum(s**2)))
    if total == 0.0:
        return 0.0
    return float(np.sqrt(np.sum(s[k:] ** 2))) / total
