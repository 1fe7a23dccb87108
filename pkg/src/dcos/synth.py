"""Seeded synthetic data used as ground truth.

Randomness comes from numpy's ``Generator(PCG64(seed))``: standard normals
for GBM increments and ``Generator.exponential`` for renewal lengths. Same
seed and numpy version give byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import TickSeries


@dataclass(frozen=True)
class GbmParams:
    s0: float = 100.0
    mu: float = 0.0
    sigma: float = 1e-4
    n_steps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not self.s0 > 0:
            raise ValueError("s0 must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def generate_gbm(params: GbmParams) -> TickSeries:
    """Log-normal path S_{t+1} = S_t exp(mu + sigma Z_t), one tick per second.

    Returns ``n_steps + 1`` ticks (the initial price included) stamped
    0, 1000, 2000, ... epoch milliseconds.
    """
    z = _rng(params.seed).standard_normal(params.n_steps)
    log_s = np.empty(params.n_steps + 1)
    log_s[0] = np.log(params.s0)
    np.cumsum(params.mu + params.sigma * z, out=log_s[1:])
    log_s[1:] += log_s[0]
    ts = np.arange(params.n_steps + 1, dtype=np.int64) * 1000
    return TickSeries(ts, np.exp(log_s))


@dataclass(frozen=True)
class RenewalStreamParams:
    lam: float = 1.0
    n_cycles: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.n_cycles < 1:
            raise ValueError("n_cycles must be at least 1")


@dataclass(frozen=True)
class RenewalSample:
    lengths: np.ndarray  # normalized overshoot lengths, i.i.d. Exp(lam)
    counts: np.ndarray  # floor(lengths), i.e. Geom(1 - exp(-lam))


def generate_renewal_lengths(params: RenewalStreamParams) -> RenewalSample:
    x = _rng(params.seed).exponential(scale=1.0 / params.lam, size=params.n_cycles)
    return RenewalSample(lengths=x, counts=np.floor(x).astype(np.int64))
