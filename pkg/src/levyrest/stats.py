"""Estimators and distances used to check tail indices and convergence."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegenerateSampleError(ValueError):
    """Raised when the top order statistics carry no tail information."""


@dataclass(frozen=True)
class HillEstimate:
    k: int
    index_hat: float
    samples_used: int


@dataclass(frozen=True)
class KSResult:
    statistic: float
    m: int
    n: int


def default_hill_k(n: int) -> int:
    return max(1, min(n - 1, int(math.floor(2.0 * math.sqrt(n)))))


def hill_estimator(samples, k: int | None = None) -> HillEstimate:
    """Hill estimate ``k / sum_{i<=k} log(X_(i) / X_(k+1))`` on descending
    order statistics. ``k`` defaults to ``floor(2 sqrt(n))``."""
    x = np.asarray(samples, dtype=float).ravel()
    n = x.size
    if k is None:
        k = default_hill_k(n)
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < len(samples), got k={k}, n={n}")
    if np.any(~(x > 0)):
        raise ValueError("Hill estimator needs strictly positive samples")
    # only the top k+1 values matter
    top = np.partition(x, n - k - 1)[n - k - 1 :]
    threshold = top.min()
    spread = np.sum(np.log(top / threshold))
    if spread <= 0.0:
        raise DegenerateSampleError("top k+1 samples are all equal")
    return HillEstimate(k=k, index_hat=k / spread, samples_used=n)


def ks_two_sample(a, b) -> KSResult:
    """Two-sample Kolmogorov-Smirnov distance ``sup |F_a - F_b|``."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return KSResult(float(np.max(np.abs(fa - fb))), a.size, b.size)


def msd(positions) -> float:
    """Mean squared Euclidean norm of an ensemble of positions."""
    p = np.asarray(positions, dtype=float)
    if p.size == 0:
        raise ValueError("empty ensemble")
    if p.ndim == 1:
        p = p[:, None]
    return float(np.mean(np.sum(p * p, axis=1)))


def inverse_mean_reference(index: float, t: float) -> float:
    """First moment ``t^index / Gamma(1 + index)`` of the inverse
    ``index``-stable subordinator at time ``t``."""
    if not 0.0 < index < 1.0:
        raise ValueError(f"index must lie in (0, 1), got {index}")
    if t < 0:
        raise ValueError("t must be non-negative")
    return t**index / math.gamma(1.0 + index)
