"""
Explicit pseudoinverse formulas.

The production pseudoinverse is ``kernels.pinv`` (SVD). The formulas here
expose structure: A^+ as the mixing matrix of F = A, H^T = A; the CR formula
A^+ = R^T (C^T A R^T)^-1 C^T; and MacDuffee's A^+ = D^T (B^T A D^T)^-1 B^T for a
full-rank factorization A = B D. The RREF path is demonstration grade.
"""

from typing import Optional, Type

import numpy as np

from ..config.settings import settings
from ..core.models import BasisPair, MetaFactorization, ProjectorPair
from ..core.service import assemble
from ..kernels.dense import lu, lu_solve, numerical_rank, pinv, rref
from ..shared.utils.exceptions import (
    DimensionMismatch,
    MetafactError,
    NotFullRank,
    SingularMiddle,
    SingularTriangular,
    ZeroMatrix,
)
from ..shared.utils.helpers import Stopwatch, relative_defect, relative_residual
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_nonempty
from .models import CrFactors, PenroseResiduals

logger = get_logger(__name__)

PINV_META_TOL = 1e-9


def _inverse(matrix: np.ndarray, error: Type[MetafactError], label: str) -> np.ndarray:
    try:
        return lu_solve(lu(matrix), np.eye(matrix.shape[0]))
    except SingularTriangular as exc:
        raise error(f"{label} is numerically singular", details=exc.details) from exc


def cr_decompose(a, pivot_tol: Optional[float] = None) -> CrFactors:
    """
    CR decomposition from the reduced row echelon form.

    Raises:
        ZeroMatrix: a has no pivot above the tolerance.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    echelon, pivots = rref(a, pivot_tol)
    if not pivots:
        raise ZeroMatrix("CR decomposition of a zero matrix is undefined", details={"shape": list(a.shape)})
    k = len(pivots)
    logger.debug("rref of %dx%d found %d pivots: %s", a.shape[0], a.shape[1], k, pivots)
    return CrFactors(c=a[:, pivots], r=echelon[:k, :], k=k, pivots=tuple(pivots))


def pinv_via_cr(a, pivot_tol: Optional[float] = None) -> np.ndarray:
    """
    A^+ = R^T (C^T A R^T)^-1 C^T with the k x k middle matrix inverted through LU.

    ``pivot_tol`` is passed to the RREF; rank-deficient floating-point input
    usually needs one well above the default.

    Raises:
        ZeroMatrix: a is zero.
        SingularMiddle: C^T A R^T is numerically singular.
    """
    a = as_matrix(a, "a")
    cr = cr_decompose(a, pivot_tol)
    middle = (cr.c.T @ a) @ cr.r.T
    return as_matrix(cr.r.T @ _inverse(middle, SingularMiddle, "C^T A R^T") @ cr.c.T, "a_pinv")


def pinv_macduffee(b, d) -> np.ndarray:
    """
    A^+ = D^T (B^T A D^T)^-1 B^T for A = B D with b m x k and d k x n of rank k.

    Raises:
        NotFullRank: b or d is rank deficient.
    """
    b = as_matrix(b, "b")
    d = as_matrix(d, "d")
    require_nonempty(b, "b")
    require_nonempty(d, "d")
    k = b.shape[1]
    if d.shape[0] != k:
        raise DimensionMismatch(f"b is {b.shape[0]}x{k} but d has {d.shape[0]} rows")
    for name, factor in (("b", b), ("d", d)):
        rank = numerical_rank(factor)
        if rank != k:
            raise NotFullRank(f"{name} has rank {rank}, expected {k}", details={"factor": name, "rank": rank, "k": k})
    a = b @ d
    middle = (b.T @ a) @ d.T
    return as_matrix(d.T @ _inverse(middle, SingularMiddle, "B^T A D^T") @ b.T, "a_pinv")


def pinv_as_meta(a) -> MetaFactorization:
    """Meta-factorization with F = A, H^T = A, whose mixing matrix is G = A^+."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    watch = Stopwatch()
    with watch.running():
        g = pinv(a)
        basis = BasisPair(f=a, h=a.T, check_rank=False)
        pair = ProjectorPair(y=g.T, x=g, k=a.shape[1], p=a @ g, r=g @ a)
    meta = assemble(a, basis, g, pair, watch.elapsed, method="pinv-meta")
    if meta.report.residual_rel > PINV_META_TOL:
        logger.warning("A A^+ A misses A by %.3e relative (limit %.0e)", meta.report.residual_rel, PINV_META_TOL)
    return meta


def pinv_cr_meta(a, pivot_tol: Optional[float] = None) -> MetaFactorization:
    """
    A^+ itself as a meta-factorization: F = R^T, H = C, G = (C^T A R^T)^-1.

    The report's residual compares F G H^T against the SVD pseudoinverse.
    """
    a = as_matrix(a, "a")
    watch = Stopwatch()
    with watch.running():
        cr = cr_decompose(a, pivot_tol)
        g = _inverse((cr.c.T @ a) @ cr.r.T, SingularMiddle, "C^T A R^T")
        basis = BasisPair(f=cr.r.T, h=cr.c)
    return assemble(pinv(a), basis, g, elapsed_seconds=watch.elapsed, method="pinv-cr")


def cr_middle_identity_defect(cr: CrFactors, a) -> float:
    """Relative gap between (R R^T)^-1 (C^T C)^-1 and (C^T A R^T)^-1."""
    a = as_matrix(a, "a")
    left = _inverse(cr.r @ cr.r.T, SingularMiddle, "R R^T") @ _inverse(cr.c.T @ cr.c, SingularMiddle, "C^T C")
    right = _inverse((cr.c.T @ a) @ cr.r.T, SingularMiddle, "C^T A R^T")
    return relative_defect(left, right)


def penrose_residuals(a, x, tol: Optional[float] = None) -> PenroseResiduals:
    """Scaled residuals of A X A = A, X A X = X, (A X)^T = A X, (X A)^T = X A."""
    a = as_matrix(a, "a")
    x = as_matrix(x, "x")
    if x.shape != (a.shape[1], a.shape[0]):
        raise DimensionMismatch(f"x must be {a.shape[1]}x{a.shape[0]}, got {x.shape[0]}x{x.shape[1]}")
    tol = settings.VERIFY_RTOL if tol is None else tol
    ax = a @ x
    xa = x @ a
    residuals = dict(
        axa=relative_residual(a, ax @ a),
        xax=relative_residual(x, xa @ x),
        ax_symmetric=relative_residual(ax, ax.T),
        xa_symmetric=relative_residual(xa, xa.T),
    )
    return PenroseResiduals(**residuals, tolerance=tol, passed=max(residuals.values()) <= tol)
