"""Threshold grid and per-threshold event frequency statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Counts, Cycles, _prepare, _trusted_walk
from .errors import InvalidRange
from .ingest import TickSeries, to_log_prices


@dataclass(frozen=True)
class ThresholdGrid:
    deltas: tuple[float, ...]

    @property
    def n_points(self) -> int:
        return len(self.deltas)

    def __iter__(self):
        return iter(self.deltas)

    def __len__(self) -> int:
        return len(self.deltas)


def make_grid(delta_min: float, delta_max: float, n: int = 50) -> ThresholdGrid:
    """``n`` log-spaced thresholds from ``delta_min`` to ``delta_max`` inclusive."""
    if not (0 < delta_min < delta_max) or not math.isfinite(delta_max):
        raise InvalidRange(f"need 0 < delta_min < delta_max, got {delta_min!r}, {delta_max!r}")
    if int(n) != n or n < 2:
        raise InvalidRange(f"need at least 2 grid points, got {n!r}")
    n = int(n)
    ratio = delta_max / delta_min
    deltas = [delta_min * ratio ** (i / (n - 1)) for i in range(n)]
    deltas[0] = delta_min
    deltas[-1] = delta_max
    return ThresholdGrid(tuple(deltas))


@dataclass(frozen=True)
class ThresholdSummary:
    """One row of the per-threshold frequency table.

    ``dc_pct`` and ``dc_pct_se`` are None when there are no events.
    """

    delta: float
    n_ticks: int
    n_dc: int
    n_os: int
    f_dc: float
    f_dc_se: float
    f_os: float
    f_os_se: float
    f_ev: float
    f_ev_se: float
    dc_pct: Optional[float]
    dc_pct_se: Optional[float]

    @property
    def n_ev(self) -> int:
        return self.n_dc + self.n_os


def _freq_se(f: float, n_ticks: int) -> float:
    # more than one event per tick is possible at tiny deltas; the binomial
    # form is meaningless there, fall back to the Poisson rate error
    if f > 1.0:
        return math.sqrt(f / n_ticks)
    return math.sqrt(f * (1.0 - f) / n_ticks)


def summary_from_counts(delta: float, n_dc: int, n_os: int, n_ticks: int) -> ThresholdSummary:
    if n_ticks <= 0:
        raise ValueError("n_ticks must be positive")
    n_ev = n_dc + n_os
    f_dc = n_dc / n_ticks
    f_os = n_os / n_ticks
    f_ev = f_dc + f_os
    if n_ev > 0:
        share = n_dc / n_ev
        dc_pct = 100.0 * share
        dc_pct_se = 100.0 * math.sqrt(share * (1.0 - share) / n_ev)
    else:
        dc_pct = dc_pct_se = None
    return ThresholdSummary(
        delta=float(delta),
        n_ticks=int(n_ticks),
        n_dc=int(n_dc),
        n_os=int(n_os),
        f_dc=f_dc,
        f_dc_se=_freq_se(f_dc, n_ticks),
        f_os=f_os,
        f_os_se=_freq_se(f_os, n_ticks),
        f_ev=f_ev,
        f_ev_se=_freq_se(f_ev, n_ticks),
        dc_pct=dc_pct,
        dc_pct_se=dc_pct_se,
    )


def summarize_threshold(series_log, n_ticks: int, delta: float) -> ThresholdSummary:
    p = _prepare(series_log, delta)
    counts, _, _ = _trusted_walk(p, float(delta), False)
    return summary_from_counts(delta, counts.n_dc, counts.n_os, n_ticks)


@dataclass
class SweepResult:
    summaries: list[ThresholdSummary]
    cycles: list[Cycles]
    extras: list = None  # per-delta output of an optional hook, grid order

    def __len__(self) -> int:
        return len(self.summaries)


def run_sweep(
    series: TickSeries,
    grid: ThresholdGrid | Sequence[float],
    jobs: int = 1,
    per_delta: Optional[Callable[[float, ThresholdSummary, Cycles], object]] = None,
) -> SweepResult:
    """Extract events at every grid threshold.

    Thresholds are independent; with ``jobs > 1`` they run on a thread pool
    over the same read-only log-price buffer (the extraction kernel releases
    the GIL). ``per_delta``, if given, runs in the worker right after
    extraction; its results are returned in ``extras``. Output order always
    follows the grid, so results do not depend on ``jobs``.
    """
    deltas = list(grid.deltas if isinstance(grid, ThresholdGrid) else grid)
    logp = _prepare(to_log_prices(series), deltas[0] if deltas else 1.0)
    n_ticks = series.n_ticks

    def work(delta: float):
        counts, _, cycles = _trusted_walk(logp, float(delta), False)
        summary = summary_from_counts(delta, counts.n_dc, counts.n_os, n_ticks)
        extra = per_delta(delta, summary, cycles) if per_delta is not None else None
        return summary, cycles, extra

    for d in deltas:
        if not d > 0:
            raise InvalidRange(f"threshold must be positive, got {d!r}")

    if jobs > 1 and len(deltas) > 1:
        # longest jobs (smallest deltas) go first for better packing
        order = sorted(range(len(deltas)), key=lambda i: deltas[i])
        out = [None] * len(deltas)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {i: pool.submit(work, deltas[i]) for i in order}
            for i, fut in futures.items():
                out[i] = fut.result()
    else:
        out = [work(d) for d in deltas]

    return SweepResult(
        summaries=[o[0] for o in out],
        cycles=[o[1] for o in out],
        extras=[o[2] for o in out] if per_delta is not None else None,
    )


def monotone_event_counts(summaries: Sequence[ThresholdSummary]) -> bool:
    """True when n_ev never increases along increasing thresholds."""
    n = np.array([s.n_ev for s in summaries])
    return bool(np.all(np.diff(n) <= 0))
