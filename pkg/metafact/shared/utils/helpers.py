import time
from contextlib import contextmanager
from typing import Iterator, List

import numpy as np

_MASK64 = (1 << 64) - 1


def fro_norm(a: np.ndarray) -> float:
    """Frobenius norm (2-norm for vectors)."""
    return float(np.linalg.norm(a))


def relative_residual(target: np.ndarray, approx: np.ndarray) -> float:
    """||target - approx||_F / ||target||_F, or the absolute residual when target is zero."""
    scale = fro_norm(target)
    residual = fro_norm(np.asarray(target) - np.asarray(approx))
    return residual / scale if scale > 0 else residual


def relative_defect(matrix: np.ndarray, reference: np.ndarray) -> float:
    """||matrix - reference||_F scaled by ||reference||_F when it is nonzero."""
    return relative_residual(reference, matrix)


def splitmix64(value: int) -> int:
    """One round of the SplitMix64 finalizer."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def split_seed(master: int, index: int) -> int:
    """Per-trial seed: SplitMix64(master + index) in 64-bit arithmetic."""
    return splitmix64((master + index) & _MASK64)


def split_seeds(master: int, count: int) -> List[int]:
    return [split_seed(master, i) for i in range(count)]


class Stopwatch:
    """Wall-clock timer; ``elapsed`` is frozen once the block exits."""

    def __init__(self):
        self._start = 0.0
        self.elapsed = 0.0

    @contextmanager
    def running(self) -> Iterator["Stopwatch"]:
        self._start = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed = time.perf_counter() - self._start
