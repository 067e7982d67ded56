import numpy as np

from ..kernels.dense import qr
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix
from .models import SyntheticKind, SyntheticSpec

logger = get_logger(__name__)


def singular_values(spec: SyntheticSpec) -> np.ndarray:
    """Prescribed spectrum of the decaying kinds: decay^j or (j + 1)^-decay, j = 0 .. min(m, n) - 1."""
    j = np.arange(min(spec.m, spec.n), dtype=np.float64)
    if spec.kind == SyntheticKind.DECAYING_GEOMETRIC:
        return spec.decay**j
    return (j + 1.0) ** (-spec.decay)


def generate(spec: SyntheticSpec) -> np.ndarray:
    """Build the matrix described by ``spec``; a pure function of the spec."""
    rng = np.random.default_rng(spec.seed)
    m, n = spec.m, spec.n
    if spec.kind == SyntheticKind.IDENTITY_LIKE:
        matrix = np.eye(m, n)
    elif spec.kind == SyntheticKind.RANK_K:
        left = rng.standard_normal((m, spec.k))
        right = rng.standard_normal((spec.k, n))
        matrix = left @ right
    else:
        p = min(m, n)
        u = qr(rng.standard_normal((m, p))).q
        v = qr(rng.standard_normal((n, p))).q
        matrix = (u * singular_values(spec)) @ v.T
    logger.debug("generated %s", spec.describe())
    return as_matrix(matrix, spec.kind.value)
