"""The log-exponential test distribution, reproducible RNG streams, and normal draws.

X = log(Y) with Y exponential(rate) has cdf 1 - exp(-rate * e^x) on the whole
real line and a heavy lower tail, which makes it a convenient stress model
for low-quantile estimation.  `rate_for_quantile` calibrates the rate so a
chosen point is exactly the p-quantile.

All sampling is inverse-CDF on uniforms drawn from the open interval (0, 1)
(a 53-bit lattice that excludes both endpoints), so every draw is finite and
every draw sequence is a pure function of (seed, stream path).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .estimators import ProbabilityLevel, Sample, _as_level
from .special_functions import normal_quantile

__all__ = [
    "RngStream",
    "LogExponential",
    "NormalParams",
    "rate_for_quantile",
    "asymptotic_variance",
    "normal_draw",
]

_U64_MAX = 2**64


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream: a root seed plus a substream path.

    Identical (seed, path) always yields the identical draw sequence.  Derive
    disjoint substreams with `child`; never share one stream between two
    purposes, since every consumer restarts the stream from its origin.
    """

    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not (isinstance(self.seed, int) and 0 <= self.seed < _U64_MAX):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not all(isinstance(i, int) and i >= 0 for i in self.path):
            raise DomainError(f"stream path must be non-negative integers, got {self.path!r}")

    def child(self, *indices: int) -> "RngStream":
        """A substream addressed by appending indices to this stream's path."""
        return RngStream(self.seed, self.path + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        """A fresh counter-based generator positioned at this stream's origin."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(ss))


def _open_uniform(gen: np.random.Generator, size: int | None = None):
    # 53-bit lattice k/2^53 with k in 1..2^53-1: strictly inside (0, 1)
    return gen.integers(1, 2**53, size=size) * 2.0**-53


@dataclass(frozen=True)
class LogExponential:
    """X = log(Y) with Y exponentially distributed at the given rate."""

    rate: float

    def __post_init__(self):
        if not (isinstance(self.rate, (int, float)) and math.isfinite(self.rate) and self.rate > 0.0):
            raise DomainError(f"rate must be finite and > 0, got {self.rate!r}")
        object.__setattr__(self, "rate", float(self.rate))

    def pdf(self, x: float) -> float:
        """Density rate * exp(x - rate * e^x); underflows to 0 in both tails."""
        x = _finite(x)
        try:
            t = self.rate * math.exp(x)
        except OverflowError:
            return 0.0
        if math.isinf(t):
            return 0.0
        return self.rate * math.exp(x - t)

    def cdf(self, x: float) -> float:
        """P(X <= x) = 1 - exp(-rate * e^x), via expm1 for accuracy near 0."""
        x = _finite(x)
        try:
            t = self.rate * math.exp(x)
        except OverflowError:
            return 1.0
        if math.isinf(t):
            return 1.0
        return -math.expm1(-t)

    def quantile(self, q: float | ProbabilityLevel) -> float:
        """Inverse CDF: log(-log(1-q) / rate)."""
        level = _as_level(q)
        return math.log(-math.log1p(-level.p)) - math.log(self.rate)

    def sample(self, n: int, rng: RngStream) -> Sample:
        """n independent inverse-CDF draws, deterministic given the stream."""
        if not (isinstance(n, int) and n >= 1):
            raise DomainError(f"sample size must be an integer >= 1, got {n!r}")
        u = _open_uniform(rng.generator(), n)
        return Sample(np.log(-np.log1p(-u)) - math.log(self.rate))


def _finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"evaluation point must be finite, got {x!r}")
    return x


def rate_for_quantile(x_p: float, p: float | ProbabilityLevel) -> LogExponential:
    """The log-exponential model whose p-quantile is exactly x_p.

    Solving 1 - exp(-rate * e^{x_p}) = p gives rate = -log(1-p) * e^{-x_p}.
    """
    level = _as_level(p)
    x_p = _finite(x_p)
    return LogExponential(rate=-math.log1p(-level.p) * math.exp(-x_p))


def asymptotic_variance(
    p: float | ProbabilityLevel, n: int, density_at_quantile: float
) -> float:
    """Large-n variance p(1-p) / (n * f(x_p)^2) of the sample p-quantile."""
    level = _as_level(p)
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"sample size must be an integer >= 1, got {n!r}")
    if not (math.isfinite(density_at_quantile) and density_at_quantile > 0.0):
        raise DomainError(
            f"density at the quantile must be finite and > 0, got {density_at_quantile!r}"
        )
    return level.p * (1.0 - level.p) / (n * density_at_quantile * density_at_quantile)


@dataclass(frozen=True)
class NormalParams:
    """Mean and variance of a normal distribution."""

    mean: float
    variance: float

    def __post_init__(self):
        if not (isinstance(self.mean, (int, float)) and math.isfinite(self.mean)):
            raise DomainError(f"mean must be finite, got {self.mean!r}")
        if not (
            isinstance(self.variance, (int, float))
            and math.isfinite(self.variance)
            and self.variance > 0.0
        ):
            raise DomainError(f"variance must be finite and > 0, got {self.variance!r}")


def normal_draw(params: NormalParams, rng: RngStream) -> float:
    """One N(mean, variance) draw by inverse CDF on a single open uniform."""
    u = float(_open_uniform(rng.generator()))
    return params.mean + math.sqrt(params.variance) * normal_quantile(u)
