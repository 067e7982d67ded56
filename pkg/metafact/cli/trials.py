"""Seeded trial runner: trials run concurrently on worker threads, results keep trial order."""

import asyncio
import csv
import statistics
from pathlib import Path
from typing import Callable, List, Optional, TypeVar, Union

from ..config.settings import settings
from ..shared.utils.helpers import split_seeds
from ..shared.utils.logger import get_logger
from .schemas import AggregateStats, MethodRecord

logger = get_logger(__name__)

T = TypeVar("T")

CSV_COLUMNS = ("trial", "seed", "method", "k", "residual_rel", "elapsed_seconds")


async def _gather_trials(trial: Callable[[int, int], T], seeds: List[int], workers: int) -> List[T]:
    semaphore = asyncio.Semaphore(workers)

    async def run_one(index: int, seed: int) -> T:
        async with semaphore:
            logger.debug(f"trial {index} started with seed {seed}")
            return await asyncio.to_thread(trial, index, seed)

    return await asyncio.gather(*(run_one(index, seed) for index, seed in enumerate(seeds)))


def run_trials(trial: Callable[[int, int], T], master_seed: int, count: int, workers: Optional[int] = None) -> List[T]:
    """
    Call ``trial(index, seed)`` for ``count`` trials with SplitMix64-split seeds.

    Results are ordered by trial index whatever the completion order.
    """
    seeds = split_seeds(master_seed, count)
    return asyncio.run(_gather_trials(trial, seeds, workers or settings.TRIAL_WORKERS))


def aggregate(records: List[MethodRecord]) -> AggregateStats:
    residuals = [record.residual_rel for record in records]
    return AggregateStats(
        count=len(residuals),
        median_residual=statistics.median(residuals),
        min_residual=min(residuals),
        max_residual=max(residuals),
    )


def write_trials_csv(records: List[MethodRecord], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(
                [record.trial, record.seed, record.method, record.k, repr(record.residual_rel), repr(record.elapsed_seconds)]
            )
