"""
Generalized Nystrom approximation A_r = A W_c (W_r^T A W_c)^+ W_r^T A.

The stabilized path factors W_r^T A W_c = Q R (thin, unpivoted) and evaluates
(A W_c R^-1)(Q^T W_r^T A). As a meta-factorization F = A W_c, G = R^-1 and
H = A^T W_r Q, with Y = W_r Q R^-T and X = W_c R^-1.
"""

from typing import Optional, Tuple

import numpy as np

from ..core.models import BasisPair, MetaFactorization, ProjectorPair
from ..core.service import assemble
from ..kernels.dense import Side, pinv, qr, solve_triangular
from ..shared.utils.exceptions import RankDeficientAnchor, SingularTriangular
from ..shared.utils.helpers import Stopwatch
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_nonempty
from .models import SketchConfig
from .sketching import draw_sketches

logger = get_logger(__name__)


def nystrom_projectors(a, omega_c, omega_r) -> Tuple[BasisPair, ProjectorPair, np.ndarray]:
    """
    Bases, projector solutions and mixing matrix for given sketches.

    Raises:
        RankDeficientAnchor: W_r^T A W_c has a zero pivot in R.
    """
    a = as_matrix(a, "a")
    omega_c = as_matrix(omega_c, "omega_c")
    omega_r = as_matrix(omega_r, "omega_r")
    f = a @ omega_c
    core = omega_r.T @ f
    factors = qr(core)
    k = omega_c.shape[1]
    try:
        r_inv = solve_triangular(factors.r, np.eye(k))
    except SingularTriangular as exc:
        raise RankDeficientAnchor(
            "sketched core W_r^T A W_c is rank deficient; resample with a different seed or lower k",
            details=exc.details,
        ) from exc
    h = (a.T @ omega_r) @ factors.q
    x = omega_c @ r_inv
    y = (omega_r @ factors.q) @ r_inv.T
    basis = BasisPair(f=f, h=h)
    pair = ProjectorPair(y=y, x=x, k=k, p=f @ y.T, r=x @ h.T)
    return basis, pair, r_inv


def generalized_nystrom(a, cfg: SketchConfig, sketches: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> MetaFactorization:
    """
    Stabilized generalized Nystrom approximation with seeded Gaussian sketches.

    Args:
        a: m x n matrix.
        cfg: Sketch sizes and seed.
        sketches: Precomputed (omega_c, omega_r); drawn from ``cfg`` when omitted.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    watch = Stopwatch()
    with watch.running():
        omega_c, omega_r = draw_sketches(cfg, m, n) if sketches is None else sketches
        basis, pair, g = nystrom_projectors(a, omega_c, omega_r)
    meta = assemble(a, basis, g, pair, watch.elapsed, seed=cfg.seed, method="nystrom")
    logger.info(
        "generalized nystrom %dx%d k=%d row_width=%d seed=%d residual_rel=%.3e",
        m,
        n,
        cfg.k,
        cfg.row_width,
        cfg.seed,
        meta.report.residual_rel,
    )
    return meta


def nystrom_unstable(a, cfg: SketchConfig, sketches: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> np.ndarray:
    """Direct A W_c (W_r^T A W_c)^+ W_r^T A through the SVD pseudoinverse."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    omega_c, omega_r = draw_sketches(cfg, m, n) if sketches is None else sketches
    f = a @ omega_c
    ht = omega_r.T @ a
    return as_matrix((f @ pinv(omega_r.T @ f)) @ ht, "a_r")
