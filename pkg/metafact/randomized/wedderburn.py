"""
Wedderburn rank-one reduction and the rank-reduction conditions.

A_{r+1} = A_r - A_r u_r v_r^T A_r / g_r with g_r = v_r^T A_r u_r. The steps
assemble into the outer-product factorization F = [A_r u_r], G = diag(g_r)^-1,
H^T = [v_r^T A_r].
"""

from typing import Callable, List, Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..core.models import BasisPair, MetaFactorization
from ..core.service import assemble
from ..kernels.dense import EPS, lu, lu_solve, pinv, svd
from ..shared.utils.exceptions import (
    DimensionMismatch,
    InvalidDimension,
    NotSquare,
    PivotBreakdown,
    SingularMixing,
    SingularTriangular,
)
from ..shared.utils.helpers import Stopwatch, fro_norm, relative_defect
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, as_vector, require_nonempty
from .models import RankReductionReport, WedderburnStep

logger = get_logger(__name__)

DirectionRule = Callable[[int, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def default_pivot_tol(a: np.ndarray) -> float:
    m, n = a.shape
    return settings.WEDDERBURN_TOL_FACTOR * max(m, n) * EPS * float(np.max(np.abs(a)))


def wedderburn_reduce(
    a,
    max_steps: Optional[int] = None,
    pivot_tol: Optional[float] = None,
    directions: Optional[DirectionRule] = None,
) -> Tuple[List[WedderburnStep], MetaFactorization]:
    """
    Deflate A one rank at a time until ||A_r||_max <= pivot_tol or max_steps.

    The default rule pivots on the largest entry (i, j) of A_r, u = e_j and
    v = e_i, and writes exact zeros into row i and column j of A_{r+1}.
    ``directions(step, A_r)`` may supply (u, v) instead.

    Raises:
        PivotBreakdown: |v^T A_r u| <= pivot_tol while A_r is still above it.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    max_steps = min(m, n) if max_steps is None else max_steps
    if max_steps < 1:
        raise InvalidDimension(f"max_steps must be at least 1, got {max_steps}")
    tol = default_pivot_tol(a) if pivot_tol is None else pivot_tol

    watch = Stopwatch()
    steps: List[WedderburnStep] = []
    columns: List[np.ndarray] = []
    rows: List[np.ndarray] = []
    with watch.running():
        work = np.array(a)
        for step in range(max_steps):
            if float(np.max(np.abs(work))) <= tol:
                break
            pivot = None
            if directions is None:
                i, j = np.unravel_index(int(np.argmax(np.abs(work))), work.shape)
                pivot = (int(i), int(j))
                u = np.zeros(n)
                u[pivot[1]] = 1.0
                v = np.zeros(m)
                v[pivot[0]] = 1.0
            else:
                u, v = directions(step, work.copy())
                u = as_vector(u, "u")
                v = as_vector(v, "v")
                if u.shape[0] != n or v.shape[0] != m:
                    raise DimensionMismatch(f"directions must have lengths ({n}, {m}), got ({u.shape[0]}, {v.shape[0]})")

            au = work @ u
            vta = v @ work
            g = float(v @ au)
            if abs(g) <= tol:
                raise PivotBreakdown(
                    f"step {step}: |v^T A_r u| = {abs(g):.3e} is below the pivot tolerance {tol:.3e}",
                    details={"step": step, "g": g, "pivot_tol": tol},
                )
            steps.append(WedderburnStep(u=u, v=v, g=g, pivot=pivot))
            columns.append(au)
            rows.append(vta)
            work = work - np.outer(au, vta) / g
            if pivot is not None:
                work[pivot[0], :] = 0.0
                work[:, pivot[1]] = 0.0

    k = len(steps)
    f = np.column_stack(columns) if columns else np.zeros((m, 0))
    h = np.column_stack(rows) if rows else np.zeros((n, 0))
    g_mix = np.diag([1.0 / step.g for step in steps]) if steps else np.zeros((0, 0))
    meta = assemble(a, BasisPair(f=f, h=h), g_mix, elapsed_seconds=watch.elapsed, method="wedderburn")
    logger.info(
        "wedderburn reduction %dx%d: %d steps, remainder max %.3e, residual_rel=%.3e",
        m,
        n,
        k,
        float(np.max(np.abs(work))),
        meta.report.residual_rel,
    )
    return steps, meta


def _rank_above(matrix: np.ndarray, cutoff: float) -> int:
    if matrix.size == 0:
        return 0
    return int(np.sum(svd(matrix).s > cutoff))


def verify_rank_reduction_conditions(a, f, g, h) -> RankReductionReport:
    """
    Check F = A W_c, G^-1 = W_r^T A W_c, H = A^T W_r for least-squares W_c, W_r,
    and rank(A - F G H^T) = rank(A) - rank(F G H^T).

    Raises:
        NotSquare: g is not square.
        SingularMixing: g is singular.
    """
    a = as_matrix(a, "a")
    f = as_matrix(f, "f")
    g = as_matrix(g, "g")
    h = as_matrix(h, "h")
    m, n = a.shape
    if g.shape[0] != g.shape[1]:
        raise NotSquare(f"g must be square, got {g.shape}")
    k = g.shape[0]
    if f.shape != (m, k) or h.shape != (n, k):
        raise DimensionMismatch(f"f {f.shape} and h {h.shape} do not match a {a.shape} and g {g.shape}")
    if k == 0:
        raise SingularMixing("empty mixing matrix")
    try:
        g_inv = lu_solve(lu(g), np.eye(k))
    except SingularTriangular as exc:
        raise SingularMixing("mixing matrix g is singular", details=exc.details) from exc

    omega_c = pinv(a) @ f
    omega_r = pinv(a.T) @ h
    rtol = settings.RANK_REDUCTION_RTOL
    column_residual = relative_defect(a @ omega_c, f)
    mixing_residual = relative_defect((omega_r.T @ a) @ omega_c, g_inv)
    row_residual = relative_defect(a.T @ omega_r, h)
    conditions = max(column_residual, mixing_residual, row_residual) <= rtol

    cutoff = rtol * fro_norm(a)
    fgh = (f @ g) @ h.T
    rank_a = _rank_above(a, cutoff)
    rank_fgh = _rank_above(fgh, cutoff)
    rank_remainder = _rank_above(a - fgh, cutoff)
    identity = rank_remainder == rank_a - rank_fgh
    return RankReductionReport(
        column_residual=column_residual,
        mixing_residual=mixing_residual,
        row_residual=row_residual,
        rank_a=rank_a,
        rank_fgh=rank_fgh,
        rank_remainder=rank_remainder,
        tolerance=rtol,
        conditions_hold=bool(conditions),
        rank_identity_holds=bool(identity),
        holds=bool(conditions and identity),
    )
