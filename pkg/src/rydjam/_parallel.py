"""Deterministic fan-out of independent trials over a thread pool.

Trials are embarrassingly parallel: each derives its own random streams from
its index, so results are collected in trial order and never depend on the
worker count.  The compiled kernels release the GIL, letting threads scale;
the pure-Python backend still runs correctly, just without speedup.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def map_trials(fn, trials: int, workers: int = 1) -> list:
    """Apply ``fn(trial_index)`` for 0 .. trials-1, results in index order."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))
