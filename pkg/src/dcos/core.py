"""Directional-change / overshoot extraction for a single threshold.

Everything happens in natural-log price space, so ``delta`` is a log-return
magnitude. The walker keeps one state per tick:

* before the first directional change both a running max and a running min
  are tracked from the first price; whichever side first sees a move of
  ``delta`` fixes the initial mode;
* in up mode the running max is tracked and a down directional change
  fires at the first tick with ``max - p >= delta`` (mirror image in down
  mode);
* a directional change is confirmed at the level ``extreme -/+ delta``; the
  k-th overshoot of the new run fires once the price is ``k`` full deltas
  beyond that confirmation level, so several events may share a tick.

A cycle is the span between two consecutive directional changes. Its
overshoot count K and normalized length ``(extreme - confirmation) / delta``
are recorded when the next directional change closes it; the run before
the first change and the open run at the end produce no cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, Optional, Sequence

import numba
import numpy as np

from .errors import EmptySeries, NonFiniteLogPrice


class Kind(IntEnum):
    DC = 0
    OS = 1


class Direction(IntEnum):
    DOWN = -1
    UP = 1


@dataclass(frozen=True)
class DcosEvent:
    kind: Kind
    direction: Direction
    tick_index: int
    level: float
    """Log-price level at which the event triggered."""
    overshoot_length_norm: Optional[float] = None
    """Set only on a directional change that closes a cycle."""


@dataclass(frozen=True)
class CycleRecord:
    overshoot_count: int
    overshoot_length_norm: float


class EventLog(Sequence[DcosEvent]):
    """Column-oriented event sequence; indexing materializes :class:`DcosEvent`."""

    def __init__(self, kind, direction, tick_index, level, length_norm):
        self.kind = kind
        self.direction = direction
        self.tick_index = tick_index
        self.level = level
        self.length_norm = length_norm  # NaN where absent

    def __len__(self) -> int:
        return int(self.kind.shape[0])

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        x = float(self.length_norm[i])
        return DcosEvent(
            Kind(int(self.kind[i])),
            Direction(int(self.direction[i])),
            int(self.tick_index[i]),
            float(self.level[i]),
            None if np.isnan(x) else x,
        )

    def __iter__(self) -> Iterator[DcosEvent]:
        for i in range(len(self)):
            yield self[i]


class Cycles(Sequence[CycleRecord]):
    """Completed cycles as two parallel arrays."""

    def __init__(self, counts: np.ndarray, lengths: np.ndarray):
        self.counts = counts
        self.lengths = lengths

    def __len__(self) -> int:
        return int(self.counts.shape[0])

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return CycleRecord(int(self.counts[i]), float(self.lengths[i]))

    def __iter__(self) -> Iterator[CycleRecord]:
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class Counts:
    n_dc: int
    n_os: int

    @property
    def n_ev(self) -> int:
        return self.n_dc + self.n_os


@numba.njit(cache=True, nogil=True)
def _walk(p, delta, record, rec_cyc, ev_kind, ev_dir, ev_idx, ev_level, ev_len, cyc_k, cyc_x):
    """Single pass over ``p``. Returns (n_dc, n_os, n_cycles).

    Buffers are written only when the matching flag (``record`` for events,
    ``rec_cyc`` for cycles) is set; otherwise they may be empty. A counting
    pass sizes them exactly: n_ev events and n_dc - 1 cycles at most.
    """
    n = p.shape[0]
    mode = 0  # 0 undetermined, +1 up, -1 down
    hi = p[0]
    lo = p[0]
    conf = 0.0  # confirmation level of the current run
    k = 0  # overshoots in the current run
    n_dc = 0
    n_os = 0
    n_cyc = 0
    m = 0  # events written
    for i in range(1, n):
        x = p[i]
        if mode == 1:
            if x > hi:
                hi = x
                while (hi - conf) / delta >= k + 1:
                    k += 1
                    n_os += 1
                    if record:
                        ev_kind[m] = 1
                        ev_dir[m] = 1
                        ev_idx[m] = i
                        ev_level[m] = conf + k * delta
                        ev_len[m] = np.nan
                        m += 1
                continue
            if hi - x < delta:
                continue
            # up run ends
            length = (hi - conf) / delta
            if rec_cyc:
                cyc_k[n_cyc] = k
                cyc_x[n_cyc] = length
            n_cyc += 1
            mode = -1
            conf = hi - delta
            # a move that only reaches delta by round-off may stop short of conf
            lo = min(x, conf)
        elif mode == -1:
            if x < lo:
                lo = x
                while (conf - lo) / delta >= k + 1:
                    k += 1
                    n_os += 1
                    if record:
                        ev_kind[m] = 1
                        ev_dir[m] = -1
                        ev_idx[m] = i
                        ev_level[m] = conf - k * delta
                        ev_len[m] = np.nan
                        m += 1
                continue
            if x - lo < delta:
                continue
            length = (conf - lo) / delta
            if rec_cyc:
                cyc_k[n_cyc] = k
                cyc_x[n_cyc] = length
            n_cyc += 1
            mode = 1
            conf = lo + delta
            hi = max(x, conf)
        else:
            length = np.nan
            if x - lo >= delta:
                mode = 1
                conf = lo + delta
                hi = max(x, conf)
            elif hi - x >= delta:
                mode = -1
                conf = hi - delta
                lo = min(x, conf)
            else:
                if x > hi:
                    hi = x
                if x < lo:
                    lo = x
                continue
        # a directional change fired at tick i in direction ``mode``
        n_dc += 1
        k = 0
        if record:
            ev_kind[m] = 0
            ev_dir[m] = mode
            ev_idx[m] = i
            ev_level[m] = conf
            ev_len[m] = length
            m += 1
        if mode == 1:
            while (hi - conf) / delta >= k + 1:
                k += 1
                n_os += 1
                if record:
                    ev_kind[m] = 1
                    ev_dir[m] = 1
                    ev_idx[m] = i
                    ev_level[m] = conf + k * delta
                    ev_len[m] = np.nan
                    m += 1
        else:
            while (conf - lo) / delta >= k + 1:
                k += 1
                n_os += 1
                if record:
                    ev_kind[m] = 1
                    ev_dir[m] = -1
                    ev_idx[m] = i
                    ev_level[m] = conf - k * delta
                    ev_len[m] = np.nan
                    m += 1
    return n_dc, n_os, n_cyc


def _prepare(log_prices, delta: float) -> np.ndarray:
    p = np.ascontiguousarray(log_prices, dtype=np.float64)
    if p.ndim != 1 or p.shape[0] == 0:
        raise EmptySeries("log-price sequence is empty")
    if not delta > 0 or not np.isfinite(delta):
        raise ValueError(f"threshold must be a positive finite number, got {delta!r}")
    bad = np.flatnonzero(~np.isfinite(p))
    if bad.size:
        raise NonFiniteLogPrice(int(bad[0]))
    return p


_NO_EVENTS = (
    np.empty(0, np.int8),
    np.empty(0, np.int8),
    np.empty(0, np.int64),
    np.empty(0, np.float64),
    np.empty(0, np.float64),
)
_NO_CYCLES = (np.empty(0, np.int64), np.empty(0, np.float64))


def _trusted_walk(p: np.ndarray, delta: float, record: bool):
    n_dc, n_os, n_cyc = _walk(p, delta, False, False, *_NO_EVENTS, *_NO_CYCLES)
    counts = Counts(int(n_dc), int(n_os))
    cyc_k = np.empty(n_cyc, np.int64)
    cyc_x = np.empty(n_cyc, np.float64)
    if record:
        n = counts.n_ev
        bufs = (
            np.empty(n, np.int8),
            np.empty(n, np.int8),
            np.empty(n, np.int64),
            np.empty(n, np.float64),
            np.empty(n, np.float64),
        )
        _walk(p, delta, True, True, *bufs, cyc_k, cyc_x)
        return counts, EventLog(*bufs), Cycles(cyc_k, cyc_x)
    if n_cyc:
        _walk(p, delta, False, True, *_NO_EVENTS, cyc_k, cyc_x)
    return counts, None, Cycles(cyc_k, cyc_x)


def extract_events(log_prices, delta: float) -> tuple[EventLog, Cycles]:
    """Full event sequence and completed cycles for one threshold."""
    p = _prepare(log_prices, delta)
    _, events, cycles = _trusted_walk(p, float(delta), True)
    return events, cycles


def extract_counts(log_prices, delta: float) -> tuple[Counts, Cycles]:
    """Event counts and cycles without materializing the event log."""
    p = _prepare(log_prices, delta)
    counts, _, cycles = _trusted_walk(p, float(delta), False)
    return counts, cycles


def count_events(events: Iterable[DcosEvent]) -> tuple[int, int, int]:
    """Return ``(n_dc, n_os, n_ev)``."""
    if isinstance(events, EventLog):
        n_dc = int(np.count_nonzero(events.kind == Kind.DC))
        n_ev = len(events)
        return n_dc, n_ev - n_dc, n_ev
    n_dc = n_os = 0
    for ev in events:
        if ev.kind == Kind.DC:
            n_dc += 1
        else:
            n_os += 1
    return n_dc, n_os, n_dc + n_os
