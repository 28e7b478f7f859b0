"""Ordered fan-out over path indices.

Each path draws from its own stream ``derive_stream(seed, path_id, lane)``
and results are gathered by path index, so the output does not depend on
the number of workers or the order in which they finish.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .limit import LimitRegime, limit_marginals, simulate_until
from .sampling import SpectralMeasure, derive_stream
from .walk import ScalingSpec, WalkParams, scaled_both

LANE_WALK = 1
LANE_LIMIT = 2
LANE_HILL = 3
LANE_CHECKS = 4


def _run_chunk(fn: Callable[[int], np.ndarray], start: int, stop: int) -> np.ndarray:
    return np.stack([fn(i) for i in range(start, stop)])


def ordered_map(fn: Callable[[int], np.ndarray], count: int, workers: int = 1, chunk: int | None = None) -> np.ndarray:
    """``np.stack([fn(0), ..., fn(count - 1)])``, optionally in worker processes.

    ``fn`` must be picklable (a module-level function or a partial of one).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if workers <= 1 or count == 1:
        return _run_chunk(fn, 0, count)
    if chunk is None:
        chunk = max(1, -(-count // (4 * workers)))
    bounds = [(s, min(s + chunk, count)) for s in range(0, count, chunk)]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        parts = list(pool.map(_run_chunk, [fn] * len(bounds), *zip(*bounds)))
    return np.concatenate(parts)


@dataclass(frozen=True)
class WalkJob:
    """Scaled wait-first and jump-first marginals of one walk path.

    Returns an array ``(2, len(times), dim)``.
    """

    params: WalkParams
    with_rests: bool
    scaling: ScalingSpec
    times: tuple[float, ...]
    seed: int
    lane: int = LANE_WALK

    def __call__(self, path_id: int) -> np.ndarray:
        rng = derive_stream(self.seed, path_id, self.lane)
        wf, jf = scaled_both(self.params, self.with_rests, self.scaling, self.times, rng)
        return np.stack([wf, jf])


@dataclass(frozen=True)
class LimitJob:
    """Wait-first and jump-first limit marginals of one jump-series path."""

    regime: LimitRegime
    spectral: SpectralMeasure
    times: tuple[float, ...]
    seed: int
    epsilon: float
    lane: int = LANE_LIMIT

    def __call__(self, path_id: int) -> np.ndarray:
        rng = derive_stream(self.seed, path_id, self.lane)
        path = simulate_until(self.regime, self.spectral, max(self.times), rng, self.epsilon)
        wf, jf = limit_marginals(path, self.times)
        return np.stack([wf, jf])


def walk_ensemble(job: WalkJob, size: int, workers: int = 1) -> np.ndarray:
    """Array ``(size, 2, len(times), dim)``; axis 1 is (wait-first, jump-first)."""
    return ordered_map(job, size, workers)


def limit_ensemble(job: LimitJob, size: int, workers: int = 1) -> np.ndarray:
    return ordered_map(job, size, workers)
