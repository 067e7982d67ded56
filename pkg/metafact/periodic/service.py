"""
Periodic factorizations from the generalized projector equation
Y^T F = Z_c, H^T X = Z_r with Z^N = I.

The projectors F Y^T and X H^T are no longer idempotent, but their N-th
powers are the orthogonal projectors F F^+ and (H^T)^+ H^T, so
(F Y^T)^(N p) A (X H^T)^(N p) = A for every p.
"""

import math
from typing import Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..core.models import BasisPair, MetaFactorization, ProjectorPair
from ..core.service import assemble, mixing_matrix
from ..kernels.dense import EPS, numerical_rank, pinv
from ..shared.utils.exceptions import DimensionMismatch, InvalidDimension, InvalidPeriod, InvalidSpec, RankDeficientAnchor
from ..shared.utils.helpers import Stopwatch, relative_defect, relative_residual
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_rows
from .models import GeneratorKind, PeriodicGenerators, PeriodicityReport, ProjectorPowerDefects

logger = get_logger(__name__)


def make_cyclic_generator(k: int, n_period: int, kind=GeneratorKind.SHIFT) -> np.ndarray:
    """
    A k x k matrix Z with Z^N = I.

    shift: floor(k / N) disjoint N-cycles, remaining coordinates fixed.
    rotation: k / 2 planar rotations by 2 pi / N (k must be even).

    Raises:
        InvalidPeriod: N < 1, N > k for shift, or odd k for rotation.
    """
    try:
        kind = GeneratorKind(kind)
    except ValueError as exc:
        raise InvalidSpec(f"unknown generator kind {kind!r}; expected shift or rotation") from exc
    if k < 1:
        raise InvalidDimension(f"generator size must be at least 1, got {k}")
    if n_period < 1:
        raise InvalidPeriod(f"period must be at least 1, got {n_period}")

    z = np.eye(k)
    if kind == GeneratorKind.SHIFT:
        if n_period > k:
            raise InvalidPeriod(f"a {k}x{k} shift cannot have period {n_period}", details={"k": k, "n_period": n_period})
        cycle = np.roll(np.eye(n_period), 1, axis=1)
        for start in range(0, k - k % n_period, n_period):
            z[start : start + n_period, start : start + n_period] = cycle
        return as_matrix(z, "z")

    if k % 2:
        raise InvalidPeriod(f"rotation generators need an even size, got k={k}", details={"k": k})
    angle = 2.0 * math.pi / n_period
    block = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    block[np.abs(block) <= 4 * EPS] = 0.0
    for start in range(0, k, 2):
        z[start : start + 2, start : start + 2] = block
    return as_matrix(z, "z")


def cyclic_generators(k: int, n_period: int, kind=GeneratorKind.SHIFT) -> PeriodicGenerators:
    z = make_cyclic_generator(k, n_period, kind)
    return PeriodicGenerators(z_c=z, z_r=z, n_period=n_period)


def periodic_meta_factorize(a, basis: BasisPair, gen: PeriodicGenerators) -> Tuple[MetaFactorization, ProjectorPair]:
    """
    Solve Y^T F = Z_c, H^T X = Z_r by Y^T = Z_c F^+, X = (H^T)^+ Z_r and form G = Y^T A X.

    Raises:
        DimensionMismatch: generator size differs from the basis width.
        RankDeficientAnchor: f or h is rank deficient.
    """
    a = as_matrix(a, "a")
    require_rows(basis.f, a.shape[0], "f")
    require_rows(basis.h, a.shape[1], "h")
    k = basis.k
    if basis.k_row != k or gen.k != k:
        raise DimensionMismatch(f"bases have widths {k}, {basis.k_row}; generators are {gen.k}x{gen.k}")
    for name, matrix in (("f", basis.f), ("h", basis.h)):
        rank = numerical_rank(matrix)
        if rank < k:
            raise RankDeficientAnchor(f"{name} has rank {rank} < k = {k}", details={"basis": name, "rank": rank})

    watch = Stopwatch()
    with watch.running():
        yt = gen.z_c @ pinv(basis.f)
        x = pinv(basis.h.T) @ gen.z_r
        pair = ProjectorPair(y=yt.T, x=x, k=k, p=basis.f @ yt, r=x @ basis.h.T)
        g = mixing_matrix(a, pair)
    meta = assemble(a, basis, g, pair, watch.elapsed, method=f"periodic-{gen.n_period}")
    logger.debug("periodic meta-factorization N=%d k=%d residual_rel=%.3e", gen.n_period, k, meta.report.residual_rel)
    return meta, pair


def verify_periodicity(
    a,
    basis: BasisPair,
    pair: ProjectorPair,
    gen: PeriodicGenerators,
    p_max: int,
    tol: Optional[float] = None,
) -> PeriodicityReport:
    """
    Residual of (F Y^T)^q A (X H^T)^q against A for every q up to N * p_max.

    Powers are applied one at a time: M_q = F (Y^T M_{q-1}) then (M X) H^T.
    Only multiples of N are judged against ``tol``; the others are recorded.
    """
    a = as_matrix(a, "a")
    if p_max < 0:
        raise InvalidDimension(f"p_max must be non-negative, got {p_max}")
    tol = settings.VERIFY_RTOL if tol is None else tol
    n_period = gen.n_period

    current = np.array(a)
    periodic = [0.0]
    intermediate = {}
    for q in range(1, n_period * p_max + 1):
        current = basis.f @ (pair.y.T @ current)
        current = (current @ pair.x) @ basis.h.T
        residual = relative_residual(a, current)
        if q % n_period == 0:
            periodic.append(residual)
        else:
            intermediate[q] = residual

    passed = all(value <= tol for value in periodic)
    if not passed:
        logger.warning("periodicity fails for N=%d: worst residual %.3e", n_period, max(periodic))
    return PeriodicityReport(
        n_period=n_period,
        p_max=p_max,
        periodic_residuals=periodic,
        intermediate_residuals=intermediate,
        tolerance=tol,
        passed=passed,
    )


def projector_power_defects(basis: BasisPair, pair: ProjectorPair, gen: PeriodicGenerators) -> ProjectorPowerDefects:
    """Compare (F Y^T)^N with F F^+ and (X H^T)^N with (H^T)^+ H^T."""
    p = basis.f @ pair.y.T
    r = pair.x @ basis.h.T
    column = np.linalg.matrix_power(p, gen.n_period)
    row = np.linalg.matrix_power(r, gen.n_period)
    return ProjectorPowerDefects(
        column=relative_defect(column, basis.f @ pinv(basis.f)),
        row=relative_defect(row, pinv(basis.h.T) @ basis.h.T),
    )
