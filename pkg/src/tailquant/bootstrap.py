"""Closed-form bootstrap variance of the rank-r sample quantile.

Resampling n observations with replacement and taking the r-th order
statistic always lands on one of the original observations; in the limit of
infinitely many resamples the probability of landing on x_(i) has the exact
closed form

    w_i = r * C(n, r) * integral over ((i-1)/n, i/n] of y^(r-1) (1-y)^(n-r) dy
        = I_{i/n}(r, n-r+1) - I_{(i-1)/n}(r, n-r+1),

using r * C(n, r) = 1 / B(r, n-r+1).  The variance estimate is the weighted
second moment of the sample about x_(r).  Weights depend only on (n, r), so
they are memoized; the cache is a transparent, idempotent memo and cannot
change results.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import RankOutOfRange
from .estimators import ProbabilityLevel, SortedSample, quantile_rank
from .special_functions import BetaParams, regularized_incomplete_beta

__all__ = ["BootstrapWeights", "VarianceEstimate", "bootstrap_weights", "bootstrap_variance"]

# Adjacent CDF values that agree to below this level carry no resolvable
# probability mass; their difference is pure cancellation noise.
_MASS_FLOOR = 1e-15

_WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BootstrapWeights:
    """Resampling probabilities of the rank-r order statistic landing on each cell."""

    n: int
    r: int
    w: np.ndarray

    def __post_init__(self):
        if self.w.shape != (self.n,):
            raise ValueError(f"expected {self.n} weights, got shape {self.w.shape}")
        if np.any(self.w < 0.0):
            raise ValueError("bootstrap weights must be non-negative")
        total = float(np.sum(self.w))
        if abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"bootstrap weights sum to {total!r}, expected 1")


@dataclass(frozen=True)
class VarianceEstimate:
    """A non-negative variance estimate with its (n, r) provenance."""

    value: float
    n: int
    r: int

    def __post_init__(self):
        if not self.value >= 0.0:
            raise ValueError(f"variance estimate must be >= 0, got {self.value!r}")


@functools.lru_cache(maxsize=16)
def _weights_array(n: int, r: int) -> np.ndarray:
    params = BetaParams(float(r), float(n - r + 1))
    cdf = np.empty(n + 1)
    for i in range(n + 1):
        cdf[i] = regularized_incomplete_beta(i / n, params)
    w = np.diff(cdf)
    w[w < _MASS_FLOOR] = 0.0
    w.flags.writeable = False
    return w


def bootstrap_weights(n: int, r: int) -> BootstrapWeights:
    """Exact infinite-resample weights w_1..w_n for the rank-r order statistic."""
    if not 1 <= r <= n:
        raise RankOutOfRange(f"rank must lie in 1..{n}, got {r}")
    return BootstrapWeights(n=n, r=r, w=_weights_array(n, r))


def bootstrap_variance(
    sorted_sample: SortedSample, p: float | ProbabilityLevel
) -> VarianceEstimate:
    """Analytic bootstrap variance of the sample p-quantile.

    Computes the weighted second moment of the observations about x_(r)
    with r = floor(n*p).  Raises InsufficientSamples when r would be zero.
    """
    n = sorted_sample.n
    r = quantile_rank(n, p)
    weights = bootstrap_weights(n, r)
    dev = sorted_sample.values - sorted_sample.values[r - 1]
    value = float(np.dot(dev * dev, weights.w))
    return VarianceEstimate(value=max(value, 0.0), n=n, r=r)
