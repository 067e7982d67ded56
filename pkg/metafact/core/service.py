"""
Meta-factorization engine.

Given bases F (column space) and H (row space) and anchors B, D, solve the
projector equation Y^T F = H^T X = I_k, form the mixing matrix G = Y^T A X and
report how well F G H^T reproduces A.
"""

from typing import Optional, Tuple

import numpy as np

from ..config.settings import Tolerances, settings
from ..kernels.dense import Side, numerical_rank, pinv, qr, solve_triangular
from ..shared.utils.exceptions import (
    DimensionMismatch,
    InconsistentSystem,
    RankDeficientAnchor,
    SingularTriangular,
)
from ..shared.utils.helpers import Stopwatch, fro_norm, relative_residual
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, as_vector, require_rows, require_shape
from .models import BasisPair, FactorReport, MetaFactorization, ProjectorPair, SketchPair

logger = get_logger(__name__)


def _left_solution(f: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Y^T = (B^T F)^+ B^T, returned as the k x m matrix Y^T."""
    btf = b.T @ f
    p, k = btf.shape
    if p < k:
        raise RankDeficientAnchor(f"left anchor has {p} columns, needs at least k={k}", details={"side": "left"})

    if p == k:
        factors = qr(btf)
        try:
            return solve_triangular(factors.r, factors.q.T @ b.T)
        except SingularTriangular as exc:
            raise RankDeficientAnchor("B^T F is singular", details={"side": "left", **exc.details}) from exc

    rank = numerical_rank(btf)
    if rank < k:
        raise RankDeficientAnchor(f"rank(B^T F) = {rank} < k = {k}", details={"side": "left", "rank": rank})
    return pinv(btf) @ b.T


def _right_solution(h: np.ndarray, d: np.ndarray) -> np.ndarray:
    """X = D (H^T D)^+, returned as the n x k matrix X."""
    htd = h.T @ d
    k, q = htd.shape
    if q < k:
        raise RankDeficientAnchor(f"right anchor has {q} columns, needs at least k={k}", details={"side": "right"})

    if q == k:
        factors = qr(htd)
        try:
            return solve_triangular(factors.r, d, side=Side.RIGHT) @ factors.q.T
        except SingularTriangular as exc:
            raise RankDeficientAnchor("H^T D is singular", details={"side": "right", **exc.details}) from exc

    rank = numerical_rank(htd)
    if rank < k:
        raise RankDeficientAnchor(f"rank(H^T D) = {rank} < k = {k}", details={"side": "right", "rank": rank})
    return d @ pinv(htd)


def solve_projector_equation(basis: BasisPair, sketch: Optional[SketchPair] = None) -> ProjectorPair:
    """
    Solve Y^T F = H^T X = I_k for the anchors in ``sketch``.

    Square anchors (B^T F and H^T D both k x k) go through QR and a triangular
    solve; rectangular anchors go through the SVD pseudoinverse and yield
    oblique projectors. Without a sketch the bases are their own anchors.

    Raises:
        RankDeficientAnchor: rank(B^T F) < k or rank(H^T D) < k.
        DimensionMismatch: anchor row counts disagree with the bases.
    """
    f, h = basis.f, basis.h
    b = f if sketch is None else sketch.b
    d = h if sketch is None else sketch.d
    require_rows(b, f.shape[0], "b")
    require_rows(d, h.shape[0], "d")

    yt = _left_solution(f, b)
    x = _right_solution(h, d)
    logger.debug(
        "projector equation solved: m=%d n=%d k=%d left=%s right=%s",
        f.shape[0],
        h.shape[0],
        basis.k,
        "square" if b.shape[1] == basis.k else "oblique",
        "square" if d.shape[1] == basis.k_row else "oblique",
    )
    return ProjectorPair(y=yt.T, x=x, k=basis.k, p=f @ yt, r=x @ h.T)


def _check_pair(pair: ProjectorPair, basis: BasisPair) -> None:
    require_shape(pair.y, basis.f.shape, "y")
    require_shape(pair.x, basis.h.shape, "x")


def projector_defect(pair: ProjectorPair, basis: BasisPair) -> float:
    """max(||Y^T F - I||_F, ||H^T X - I||_F)."""
    _check_pair(pair, basis)
    left = fro_norm(pair.y.T @ basis.f - np.eye(basis.k))
    right = fro_norm(basis.h.T @ pair.x - np.eye(basis.k_row))
    return max(left, right)


def projector_tolerance(basis: BasisPair) -> float:
    return Tolerances.penrose_tol(basis.m, basis.n) * (fro_norm(basis.f) + fro_norm(basis.h))


def _idempotency_defect(left: np.ndarray, right_t: np.ndarray) -> Tuple[float, np.ndarray]:
    """Relative ||P^2 - P||_F for P = left @ right_t, using P^2 - P = left (right_t left - I) right_t."""
    projector = left @ right_t
    inner = right_t @ left - np.eye(left.shape[1])
    scale = fro_norm(projector)
    defect = fro_norm(left @ (inner @ right_t))
    return (defect / scale if scale > 0 else defect), projector


def verify_idempotent(pair: ProjectorPair, basis: BasisPair, tol: Optional[float] = None) -> FactorReport:
    """
    Measure how far P = F Y^T and R = X H^T are from being projectors.

    Reporting only: violations are recorded in ``within_tolerance``, never raised.

    Raises:
        DimensionMismatch: pair and basis shapes disagree.
    """
    _check_pair(pair, basis)
    tol = projector_tolerance(basis) if tol is None else tol

    defect_p, p = _idempotency_defect(basis.f, pair.y.T)
    defect_r, r = _idempotency_defect(pair.x, basis.h.T)
    return FactorReport(
        idem_defect_p=defect_p,
        idem_defect_r=defect_r,
        rank_p=numerical_rank(p) if p.size else 0,
        rank_r=numerical_rank(r) if r.size else 0,
        projector_defect=projector_defect(pair, basis),
        tolerance=tol,
        within_tolerance=bool(defect_p <= tol and defect_r <= tol),
    )


def mixing_matrix(a, pair: ProjectorPair) -> np.ndarray:
    """G = Y^T A X, associated as (Y^T A) X when m >= n and Y^T (A X) otherwise."""
    a = as_matrix(a, "a")
    m, n = a.shape
    require_rows(pair.y, m, "y")
    require_rows(pair.x, n, "x")
    if m >= n:
        g = (pair.y.T @ a) @ pair.x
    else:
        g = pair.y.T @ (a @ pair.x)
    return as_matrix(g, "g")


def reconstruct(f, g, h) -> np.ndarray:
    """F G H^T, associated as (F G) H^T."""
    f = as_matrix(f, "f")
    g = as_matrix(g, "g")
    h = as_matrix(h, "h")
    if g.shape != (f.shape[1], h.shape[1]):
        raise DimensionMismatch(f"g must be {f.shape[1]}x{h.shape[1]}, got {g.shape[0]}x{g.shape[1]}")
    return as_matrix((f @ g) @ h.T)


def factor_report(
    a: np.ndarray,
    basis: BasisPair,
    g: np.ndarray,
    pair: Optional[ProjectorPair] = None,
    elapsed_seconds: float = 0.0,
    seed: Optional[int] = None,
) -> FactorReport:
    """Fill a FactorReport for an assembled (F, G, H); idempotency fields need ``pair``."""
    residual = relative_residual(a, reconstruct(basis.f, g, basis.h))
    detected = numerical_rank(g) if g.size else 0
    fields = dict(residual_rel=residual, detected_rank=detected, elapsed_seconds=elapsed_seconds, seed=seed)
    if pair is not None:
        idem = verify_idempotent(pair, basis)
        fields.update(idem.model_dump(exclude={"residual_rel", "detected_rank", "elapsed_seconds", "seed"}))
    return FactorReport(**fields)


def assemble(
    a: np.ndarray,
    basis: BasisPair,
    g: np.ndarray,
    pair: Optional[ProjectorPair] = None,
    elapsed_seconds: float = 0.0,
    seed: Optional[int] = None,
    method: Optional[str] = None,
) -> MetaFactorization:
    report = factor_report(a, basis, g, pair, elapsed_seconds, seed)
    return MetaFactorization(basis=basis, g=g, k=basis.k, report=report, projectors=pair, method=method)


def meta_factorize(a, basis: BasisPair, sketch: Optional[SketchPair] = None) -> MetaFactorization:
    """
    Factor A = F G H^T for the given bases.

    Solves the projector equation, forms G = Y^T A X and reports residual_rel.
    Bases that only approximate C(A) or C(A^T) are legitimate: the residual is
    reported, never raised.

    Raises:
        RankDeficientAnchor: propagated from solve_projector_equation.
    """
    a = as_matrix(a, "a")
    require_rows(basis.f, a.shape[0], "f")
    require_rows(basis.h, a.shape[1], "h")

    watch = Stopwatch()
    with watch.running():
        pair = solve_projector_equation(basis, sketch)
        g = mixing_matrix(a, pair)

    meta = assemble(a, basis, g, pair, watch.elapsed, method="meta")
    logger.info(
        "meta-factorization %dx%d k=%d residual_rel=%.3e",
        a.shape[0],
        a.shape[1],
        meta.k,
        meta.report.residual_rel,
    )
    return meta


def penrose_general_solution(a, basis: BasisPair, sketch: Optional[SketchPair], w) -> np.ndarray:
    """
    G(W) = Y^T A X + W - Y^T F W H^T X.

    Every G(W) reconstructs the same F G H^T whenever the projector equation holds.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    require_shape(w, (basis.k, basis.k_row), "w")
    pair = solve_projector_equation(basis, sketch)
    g0 = mixing_matrix(a, pair)
    return as_matrix(g0 + w - (pair.y.T @ basis.f) @ w @ (basis.h.T @ pair.x))


def penrose_condition(a, basis: BasisPair) -> float:
    """
    Relative residual of A = F F^+ A (H^T)^+ H^T.

    Zero (to rounding) exactly when C(F) contains C(A) and C(H) contains C(A^T),
    the solvability condition of the reconstruction equation.
    """
    a = as_matrix(a, "a")
    require_rows(basis.f, a.shape[0], "f")
    require_rows(basis.h, a.shape[1], "h")
    left = basis.f @ (pinv(basis.f) @ a)
    both = (left @ pinv(basis.h.T)) @ basis.h.T
    return relative_residual(a, both)


def solve_vector_equation(a, c, b_anchor, y_free=None) -> np.ndarray:
    """
    General solution x = Y^T c + (I - Y^T A) y of A x = c.

    Y^T = (B^T A)^+ B^T is built from the anchor ``b_anchor``; ``y_free``
    selects the member of the solution family and only moves x within the
    nullspace of A.

    Raises:
        InconsistentSystem: c is not in the column space of A.
        RankDeficientAnchor: rank(B^T A) != rank(A).
    """
    a = as_matrix(a, "a")
    m, n = a.shape
    c = as_vector(c, "c")
    if c.shape[0] != m:
        raise DimensionMismatch(f"c must have length {m}, got {c.shape[0]}")
    b = as_matrix(b_anchor, "b_anchor")
    require_rows(b, m, "b_anchor")
    y = np.zeros(n) if y_free is None else as_vector(y_free, "y_free")
    if y.shape[0] != n:
        raise DimensionMismatch(f"y_free must have length {n}, got {y.shape[0]}")

    a_pinv = pinv(a)
    outside = fro_norm(c - a @ (a_pinv @ c))
    scale = fro_norm(c)
    if outside > settings.CONSISTENCY_RTOL * scale:
        raise InconsistentSystem(
            "right-hand side is not in the column space of a",
            details={"residual": outside, "norm": scale},
        )

    bta = b.T @ a
    rank_a = numerical_rank(a) if a.size else 0
    rank_bta = numerical_rank(bta) if bta.size else 0
    if rank_bta != rank_a:
        raise RankDeficientAnchor(
            f"rank(B^T A) = {rank_bta} differs from rank(A) = {rank_a}",
            details={"rank_bta": rank_bta, "rank_a": rank_a},
        )

    yt = pinv(bta) @ b.T
    x = yt @ c + y - yt @ (a @ y)
    return as_vector(x, "x")
