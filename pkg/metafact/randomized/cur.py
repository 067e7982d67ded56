"""
CUR decomposition A ~ C U R from selected columns J and rows I.

The mixing matrix is U = (B^T C)^+ B^T A D (R D)^+ with anchors
B = C, D = R^T (orthogonal: C C^+ A R^+ R) or B = I_m(:, I), D = I_n(:, J)
(interpolative: U = A(I, J)^+).
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.models import FactorReport
from ..kernels.dense import numerical_rank, pinv
from ..shared.utils.exceptions import DimensionMismatch, DuplicateIndex, IndexOutOfRange, InvalidDimension, RankTooLarge
from ..shared.utils.helpers import Stopwatch, relative_residual
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix, require_nonempty
from .models import CurFactors, CurMode

logger = get_logger(__name__)


def _check_indices(indices: Sequence[int], bound: int, name: str) -> Tuple[int, ...]:
    checked = []
    for raw in indices:
        index = int(raw)
        if index != raw or not 0 <= index < bound:
            raise IndexOutOfRange(f"{name} index {raw} outside [0, {bound})", details={"index": raw, "bound": bound})
        checked.append(index)
    if len(set(checked)) != len(checked):
        raise DuplicateIndex(f"{name} indices must be unique", details={"indices": checked})
    return tuple(checked)


def cur(a, row_idx: Sequence[int], col_idx: Sequence[int], mode=CurMode.ORTHOGONAL, seed: Optional[int] = None) -> CurFactors:
    """
    CUR factors for the given row set I and column set J.

    Raises:
        IndexOutOfRange: an index is outside the matrix.
        DuplicateIndex: an index is repeated.
        DimensionMismatch: |I| != |J|.
    """
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    mode = CurMode(mode)
    rows = _check_indices(row_idx, m, "row")
    cols = _check_indices(col_idx, n, "column")
    if len(rows) != len(cols):
        raise DimensionMismatch(f"|I| = {len(rows)} and |J| = {len(cols)} must agree")
    if not rows:
        raise InvalidDimension("CUR needs at least one row and one column")

    watch = Stopwatch()
    with watch.running():
        c = a[:, list(cols)]
        r = a[list(rows), :]
        if mode == CurMode.ORTHOGONAL:
            u_mix = (pinv(c) @ a) @ pinv(r)
        else:
            u_mix = pinv(a[np.ix_(rows, cols)])

    factors = CurFactors(c=c, u_mix=u_mix, r=r, col_idx=cols, row_idx=rows, mode=mode)
    report = FactorReport(
        residual_rel=relative_residual(a, factors.reconstruction()),
        detected_rank=numerical_rank(factors.u_mix),
        elapsed_seconds=watch.elapsed,
        seed=seed,
    )
    logger.info("cur %s %dx%d k=%d residual_rel=%.3e", mode.value, m, n, len(rows), report.residual_rel)
    return factors.model_copy(update={"report": report})


def cur_random_naive(a, k: int, seed: int, mode=CurMode.ORTHOGONAL) -> CurFactors:
    """CUR with I and J drawn uniformly without replacement (rows first, then columns)."""
    a = as_matrix(a, "a")
    require_nonempty(a, "a")
    m, n = a.shape
    if k < 1:
        raise InvalidDimension(f"rank must be at least 1, got {k}")
    if k > min(m, n):
        raise RankTooLarge(f"k={k} exceeds min(m, n)={min(m, n)}", details={"k": k, "m": m, "n": n})
    rng = np.random.default_rng(seed)
    rows = rng.choice(m, size=k, replace=False)
    cols = rng.choice(n, size=k, replace=False)
    return cur(a, rows.tolist(), cols.tolist(), mode=mode, seed=seed)
