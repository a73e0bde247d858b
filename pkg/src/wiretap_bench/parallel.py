"""Seeded substreams and a scheduler-independent parallel map.

Every unit of work (a trial, a sample chunk) draws from its own generator
keyed by (seed, stream tag, index), so results never depend on which worker
ran which unit or in what order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

THREADS_ENV = "WIRETAP_BENCH_THREADS"


def substream(seed: int, tag: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(tag, index))
    return np.random.Generator(np.random.PCG64(ss))


def max_threads(requested: int | None = None) -> int:
    cap = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        cap = max(1, int(env))
    if requested is not None:
        return max(1, min(requested, cap)) if env else max(1, requested)
    return cap


def ordered_map(fn: Callable[[int], T], indices: Sequence[int],
                threads: int | None = None) -> list[T]:
    """Apply fn to each index, returning results in index order."""
    workers = max_threads(threads)
    if workers == 1 or len(indices) <= 1:
        return [fn(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, indices))
