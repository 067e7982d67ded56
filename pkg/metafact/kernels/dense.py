"""
Dense linear algebra kernels.

Thin, deterministic wrappers over LAPACK (via scipy) that add the conventions
the rest of the package relies on: hard zeros in triangular factors,
non-negative diagonal of R, sign-fixed singular vectors, typed errors, and a
single rank-detection rule.
"""

import warnings
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from ..config.settings import Tolerances
from ..shared.utils.exceptions import DimensionMismatch, InvalidDimension, RankTooLarge, SingularTriangular
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_nonempty, require_square
from .models import LuFactors, QrFactors, SvdFactors

logger = get_logger(__name__)

EPS = Tolerances.eps


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Uplo(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


def qr(a, pivot: bool = False, full: bool = False) -> QrFactors:
    """
    Householder QR, optionally column pivoted.

    Args:
        a: m x n matrix, m, n >= 1.
        pivot: Use column pivoting (LAPACK geqp3); |r_ii| is then non-increasing.
        full: Return the square m x m orthogonal factor instead of the thin one.

    Returns:
        QrFactors: a[:, perm] = q @ r, diag(r) >= 0, exact zeros below the diagonal.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    mode = "full" if full else "economic"
    if pivot:
        q, r, perm = scipy.linalg.qr(a, mode=mode, pivoting=True, check_finite=False)
    else:
        q, r = scipy.linalg.qr(a, mode=mode, check_finite=False)
        perm = np.arange(n)

    p = min(m, n)
    signs = np.sign(np.diag(r)[:p])
    signs[signs == 0] = 1.0
    q = np.array(q)
    q[:, :p] *= signs
    r = np.array(r)
    r[:p, :] *= signs[:, None]
    # triu rewrites the strictly lower part with +0.0
    r = np.triu(r)
    return QrFactors(q=q, r=r, perm=tuple(int(i) for i in perm))


def svd(a) -> SvdFactors:
    """
    Reduced SVD with a deterministic sign convention.

    The first entry of each left singular vector whose magnitude exceeds
    max(m, n) * eps is made non-negative; the right vector flips with it.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    try:
        u, s, vt = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd", check_finite=False)
    except np.linalg.LinAlgError:
        logger.warning(f"gesvd did not converge on a {m}x{n} matrix, retrying with gesdd")
        u, s, vt = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesdd", check_finite=False)

    v = vt.T.copy()
    u = u.copy()
    cutoff = max(m, n) * EPS
    significant = np.abs(u) > cutoff
    first = np.argmax(significant, axis=0)
    leading = u[first, np.arange(u.shape[1])]
    signs = np.where(leading < 0, -1.0, 1.0)
    u *= signs
    v *= signs
    return SvdFactors(u=u, s=np.maximum(s, 0.0), v=v)


def numerical_rank(a, rtol: Optional[float] = None) -> int:
    """Count of singular values above rtol * s_max (default rtol = max(m, n) * eps)."""
    a = as_matrix(a, "a")
    if a.size == 0:
        return 0
    m, n = a.shape
    return svd(a).rank(Tolerances.rank_rtol(m, n) if rtol is None else rtol)


def lu(a) -> LuFactors:
    """
    LU with partial pivoting of a square matrix: a[perm, :] = l @ u.

    A singular input still factors; the zero pivot shows up on the diagonal of u.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_square(a, "a")
    k = a.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        packed, pivots = scipy.linalg.lu_factor(a, check_finite=False)

    perm = np.arange(k)
    for i, p in enumerate(pivots):
        perm[[i, p]] = perm[[p, i]]

    l = np.tril(packed, -1) + np.eye(k)
    u = np.triu(packed)
    return LuFactors(l=l, u=u, perm=tuple(int(i) for i in perm))


def lu_solve(factors: LuFactors, b) -> np.ndarray:
    """Solve a @ x = b from the LU factors of a."""
    b = as_matrix(b, "b")
    y = solve_triangular(factors.l, b[list(factors.perm), :], side=Side.LEFT, uplo=Uplo.LOWER)
    return solve_triangular(factors.u, y, side=Side.LEFT, uplo=Uplo.UPPER)


def pinv(a, rtol: Optional[float] = None) -> np.ndarray:
    """
    Moore-Penrose pseudoinverse from the SVD.

    Singular values s_i <= rtol * s_max are treated as zero; the default
    rtol is max(m, n) * eps.
    """
    a = as_matrix(a, "a")
    m, n = a.shape
    if a.size == 0:
        return as_matrix(np.zeros((n, m)))
    if rtol is None:
        rtol = Tolerances.rank_rtol(m, n)
    factors = svd(a)
    s = factors.s
    keep = s > rtol * s[0] if s.size else np.zeros(0, dtype=bool)
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return as_matrix((factors.v * s_inv) @ factors.u.T)


def rref(a, pivot_tol: Optional[float] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form by Gauss-Jordan elimination with partial pivoting.

    Demonstration grade: entries with magnitude <= pivot_tol count as zero and
    are flushed to exact zeros. The default tolerance is max(m, n) * eps * max|a|.

    Returns:
        (echelon matrix, ordered pivot columns)
    """
    a = as_matrix(a, "a")
    m, n = a.shape
    if pivot_tol is None:
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        pivot_tol = max(m, n, 1) * EPS * scale

    work = np.array(a)
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        candidate = row + int(np.argmax(np.abs(work[row:, col])))
        if abs(work[candidate, col]) <= pivot_tol:
            work[row:, col] = 0.0
            continue
        if candidate != row:
            work[[row, candidate], :] = work[[candidate, row], :]
        work[row, :] = work[row, :] / work[row, col]
        work[row, col] = 1.0
        for other in range(m):
            if other != row and work[other, col] != 0.0:
                work[other, :] -= work[other, col] * work[row, :]
                work[other, col] = 0.0
        pivots.append(col)
        row += 1

    work[np.abs(work) <= pivot_tol] = 0.0
    return as_matrix(work), pivots


def solve_triangular(r, b, side: Union[Side, str] = Side.LEFT, uplo: Union[Uplo, str] = Uplo.UPPER) -> np.ndarray:
    """
    Solve r @ x = b (side=left) or x @ r = b (side=right) for triangular r.

    Raises:
        SingularTriangular: some |r_ii| <= eps * max|r|.
    """
    r = as_matrix(r, "r")
    b = as_matrix(b, "b")
    require_square(r, "r")
    side = Side(side)
    lower = Uplo(uplo) == Uplo.LOWER
    k = r.shape[0]

    if side == Side.LEFT and b.shape[0] != k:
        raise DimensionMismatch(f"left solve needs b with {k} rows, got {b.shape}")
    if side == Side.RIGHT and b.shape[1] != k:
        raise DimensionMismatch(f"right solve needs b with {k} columns, got {b.shape}")

    scale = float(np.max(np.abs(r))) if r.size else 0.0
    diagonal = np.abs(np.diag(r))
    if k and (scale == 0.0 or np.any(diagonal <= EPS * scale)):
        worst = int(np.argmin(diagonal))
        raise SingularTriangular(
            f"triangular factor is numerically singular at diagonal {worst}",
            details={"index": worst, "value": float(diagonal[worst]), "scale": scale},
        )

    if side == Side.LEFT:
        x = scipy.linalg.solve_triangular(r, b, lower=lower, check_finite=False)
    else:
        x = scipy.linalg.solve_triangular(r, b.T, trans="T", lower=lower, check_finite=False).T
    return as_matrix(x)


def require_rank(a, k: int, name: str = "a") -> int:
    """
    Check 1 <= k <= numerical rank of ``a`` and return the rank.

    Raises:
        InvalidDimension: k < 1.
        RankTooLarge: k exceeds the numerical rank.
    """
    a = as_matrix(a, name)
    if k < 1:
        raise InvalidDimension(f"rank must be at least 1, got {k}")
    rank = numerical_rank(a)
    if k > rank:
        raise RankTooLarge(
            f"requested rank {k} exceeds the numerical rank {rank} of {name}",
            details={"k": k, "rank": rank, "shape": list(a.shape)},
        )
    return rank
