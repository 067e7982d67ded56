"""
Classical factorizations rebuilt as meta-factorizations.

SVD and CPQR are recovered by choosing their bases for F and H; the UTV family
is produced by factoring the mixing matrix of a QR-based meta-factorization.
"""

from typing import Tuple

import numpy as np

from ..core.models import BasisPair, MetaFactorization
from ..core.service import assemble, meta_factorize
from ..kernels.dense import EPS, lu, qr, require_rank, svd
from ..shared.utils.exceptions import RankDeficientAnchor
from ..shared.utils.helpers import Stopwatch, fro_norm
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_nonempty
from .models import TStructure, UtvFactors, UtvVariant

logger = get_logger(__name__)


def svd_via_meta(a, k: int) -> MetaFactorization:
    """Meta-factorize with the leading k singular vectors as bases; G = diag(s_1..s_k)."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    watch = Stopwatch()
    with watch.running():
        factors = svd(a)
        basis = BasisPair(f=factors.u[:, :k], h=factors.v[:, :k])
        meta = meta_factorize(a, basis)
    return meta.model_copy(
        update={"method": "svd-meta", "report": meta.report.model_copy(update={"elapsed_seconds": watch.elapsed})}
    )


def cpqr_bases(a, k: int) -> BasisPair:
    """F = Q(:, :k) and H^T = R(:k, :) Pi^T from a column-pivoted QR of a."""
    factors = qr(a, pivot=True)
    ht = np.zeros((k, a.shape[1]))
    ht[:, list(factors.perm)] = factors.r[:k, :]
    return BasisPair(f=factors.q[:, :k], h=ht.T)


def cpqr_mixing(a, k: int) -> Tuple[MetaFactorization, float]:
    """
    Meta-factorize with CPQR bases and measure ||G - I_k||_F.

    The mixing matrix of a CPQR is the identity; the deviation is reported,
    not asserted.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    watch = Stopwatch()
    with watch.running():
        meta = meta_factorize(a, cpqr_bases(a, k))
    deviation = fro_norm(meta.g - np.eye(k))
    logger.info("cpqr mixing matrix deviation from identity: %.3e (k=%d)", deviation, k)
    meta = meta.model_copy(
        update={"method": "cpqr", "report": meta.report.model_copy(update={"elapsed_seconds": watch.elapsed})}
    )
    return meta, deviation


def _utv(a, u, t, v, variant: UtvVariant, structure: TStructure, k: int, meta: MetaFactorization, elapsed: float):
    utv = UtvFactors(u=u, t=t, v=v, variant=variant, structure=structure, k=k, report=meta.report)
    report = meta.report.model_copy(update={"residual_rel": utv.residual_rel(a), "elapsed_seconds": elapsed})
    logger.info("%s UTV %dx%d k=%d residual_rel=%.3e", variant.value, a.shape[0], a.shape[1], k, report.residual_rel)
    return utv.model_copy(update={"report": report})


def utv_row_svd(a, k: int) -> UtvFactors:
    """
    UTV from the row-space projector only.

    With A^T Pi = Q_r R_r (full Q_r) and the SVD A Q_r(:, :k) = U_ S_ V_^T:
    U = U_, T = [S_ | U_^T A Q_r(:, k:)], V = Q_r blockdiag(V_, I).
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    n = a.shape[1]
    watch = Stopwatch()
    with watch.running():
        q_r = qr(a.T, pivot=True, full=True).q
        basis = BasisPair(f=a @ q_r[:, :k], h=q_r[:, :k])
        meta = assemble(a, basis, np.eye(k), method="row-projector")
        inner = svd(basis.f)
        t = np.zeros((k, n))
        t[:, :k] = np.diag(inner.s)
        t[:, k:] = inner.u.T @ (a @ q_r[:, k:])
        rotation = np.eye(n)
        rotation[:k, :k] = inner.v
        v = q_r @ rotation
    return _utv(a, inner.u, t, v, UtvVariant.ROW_SVD, TStructure.UPPER, k, meta, watch.elapsed)


def two_sided_bases(a, k: int, full_row: bool = False) -> Tuple[BasisPair, np.ndarray]:
    """F = Q_c(:, :k), H = Q_r(:, :k) from CPQRs of A and A^T; also returns Q_r."""
    q_c = qr(a, pivot=True).q
    q_r = qr(a.T, pivot=True, full=full_row).q
    return BasisPair(f=q_c[:, :k], h=q_r[:, :k]), q_r


def utv_two_sided_svd(a, k: int) -> UtvFactors:
    """U = Y U_, T = [S_ | U_^T Y^T A Q_r(:, k:)], V = Q_r blockdiag(V_, I) with G = U_ S_ V_^T."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    n = a.shape[1]
    watch = Stopwatch()
    with watch.running():
        basis, q_r = two_sided_bases(a, k, full_row=True)
        meta = meta_factorize(a, basis)
        y = meta.projectors.y
        inner = svd(meta.g)
        t = np.zeros((k, n))
        t[:, :k] = np.diag(inner.s)
        t[:, k:] = inner.u.T @ ((y.T @ a) @ q_r[:, k:])
        rotation = np.eye(n)
        rotation[:k, :k] = inner.v
        u = y @ inner.u
        v = q_r @ rotation
    return _utv(a, u, t, v, UtvVariant.TWO_SIDED_SVD, TStructure.UPPER, k, meta, watch.elapsed)


def utv_two_sided_qr(a, k: int) -> UtvFactors:
    """U = Q_c(:, :k) Q_, T = R_, V = Q_r(:, :k) Pi_ with G Pi_ = Q_ R_."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    watch = Stopwatch()
    with watch.running():
        basis, _ = two_sided_bases(a, k)
        meta = meta_factorize(a, basis)
        inner = qr(meta.g, pivot=True)
        u = basis.f @ inner.q
        v = basis.h @ inner.permutation_matrix
    return _utv(a, u, inner.r, v, UtvVariant.TWO_SIDED_QR, TStructure.UPPER, k, meta, watch.elapsed)


def utv_two_sided_lu(a, k: int) -> UtvFactors:
    """
    U = Q_c(:, :k) P^T, T = L, V = Q_r(:, :k) U_^T with P G = L U_.

    Raises:
        RankDeficientAnchor: the mixing matrix is numerically singular.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    require_rank(a, k)
    watch = Stopwatch()
    with watch.running():
        basis, _ = two_sided_bases(a, k)
        meta = meta_factorize(a, basis)
        inner = lu(meta.g)
        pivots = np.abs(np.diag(inner.u))
        scale = float(np.max(np.abs(meta.g)))
        if scale == 0.0 or np.min(pivots) <= k * EPS * scale:
            raise RankDeficientAnchor(
                "mixing matrix is singular, LU-based UTV is undefined",
                details={"min_pivot": float(np.min(pivots)), "scale": scale},
            )
        u = basis.f @ inner.permutation_matrix.T
        v = basis.h @ inner.u.T
    return _utv(a, u, inner.l, v, UtvVariant.TWO_SIDED_LU, TStructure.LOWER, k, meta, watch.elapsed)


UTV_BUILDERS = {
    UtvVariant.ROW_SVD: utv_row_svd,
    UtvVariant.TWO_SIDED_SVD: utv_two_sided_svd,
    UtvVariant.TWO_SIDED_QR: utv_two_sided_qr,
    UtvVariant.TWO_SIDED_LU: utv_two_sided_lu,
}


def utv(a, k: int, variant=UtvVariant.TWO_SIDED_QR) -> UtvFactors:
    return UTV_BUILDERS[UtvVariant(variant)](a, k)
