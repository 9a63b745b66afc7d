"""Deterministic worker pool over independent trials.

MPMSA_THREADS sets the worker count (default 1).  Each trial is a pure
function of (substream(master_seed, index), index) and results land in a
per-index slot, so any schedule produces identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

from .rng import substream

T = TypeVar("T")

ENV_THREADS = "MPMSA_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_trials(fn: Callable[[int, int], T], n_trials: int, master_seed: int) -> list[T]:
    """results[i] = fn(trial_seed_i, i); reduction is by trial index."""
    seeds = [substream(master_seed, i) for i in range(n_trials)]
    workers = thread_count()
    results: list[T] = [None] * n_trials  # type: ignore[list-item]
    if workers == 1:
        for i, s in enumerate(seeds):
            results[i] = fn(s, i)
        return results
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(fn, s, i): i for i, s in enumerate(seeds)}
        for fut, i in futures.items():
            results[i] = fut.result()
    return results

