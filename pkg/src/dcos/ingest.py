"""Loading and validating midprice tick files.

Input is delimited text with a header row. Timestamps are integer epoch
milliseconds, prices are positive midprices. Consecutive duplicate
timestamps are fine; a decreasing timestamp is an error.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import pandas as pd

from .errors import EmptyInput, NonPositivePrice, ParseError, TimestampRegression

# header occupies line 1
_FIRST_DATA_LINE = 2


@dataclass(frozen=True)
class Tick:
    timestamp: int
    price: float


@dataclass(frozen=True)
class ColumnFormat:
    timestamp: str = "timestamp"
    price: str = "price"
    delimiter: str = ","


class TickSeries:
    """Immutable ordered (timestamp, price) samples.

    Both arrays are read-only so a single series can be shared between
    worker threads without copying.
    """

    __slots__ = ("timestamps", "prices")

    def __init__(self, timestamps, prices, *, validate: bool = True):
        ts = np.array(timestamps, dtype=np.int64)
        px = np.array(prices, dtype=np.float64)
        if ts.shape != px.shape or ts.ndim != 1:
            raise ValueError("timestamps and prices must be 1-d arrays of equal length")
        if validate:
            _validate(ts, px)
        ts.flags.writeable = False
        px.flags.writeable = False
        self.timestamps = ts
        self.prices = px

    @property
    def n_ticks(self) -> int:
        return int(self.prices.shape[0])

    def __len__(self) -> int:
        return self.n_ticks

    def __iter__(self) -> Iterator[Tick]:
        for t, p in zip(self.timestamps.tolist(), self.prices.tolist()):
            yield Tick(t, p)

    def __getitem__(self, i: int) -> Tick:
        return Tick(int(self.timestamps[i]), float(self.prices[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TickSeries):
            return NotImplemented
        return bool(
            np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.prices, other.prices)
        )

    def __repr__(self) -> str:
        return f"TickSeries(n_ticks={self.n_ticks})"


def _validate(ts: np.ndarray, px: np.ndarray) -> None:
    bad = np.flatnonzero(~(px > 0))
    if bad.size:
        i = int(bad[0])
        raise NonPositivePrice(i + _FIRST_DATA_LINE, float(px[i]))
    if ts.size > 1:
        back = np.flatnonzero(np.diff(ts) < 0)
        if back.size:
            raise TimestampRegression(int(back[0]) + 1 + _FIRST_DATA_LINE)


def _locate_parse_error(path, fmt: ColumnFormat) -> None:
    """Slow row-by-row pass used only to report where the fast parser choked."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=fmt.delimiter)
        for col in (fmt.timestamp, fmt.price):
            if reader.fieldnames is None or col not in reader.fieldnames:
                raise ParseError(1, col, "<missing column>")
        for line, row in enumerate(reader, start=_FIRST_DATA_LINE):
            raw_t, raw_p = row[fmt.timestamp], row[fmt.price]
            try:
                int(raw_t)
            except (TypeError, ValueError):
                raise ParseError(line, fmt.timestamp, raw_t) from None
            try:
                float(raw_p)
            except (TypeError, ValueError):
                raise ParseError(line, fmt.price, raw_p) from None


def load_ticks(path, fmt: ColumnFormat | None = None) -> TickSeries:
    """Read a delimited tick file into a validated :class:`TickSeries`.

    Raises FileNotFoundError, :class:`EmptyInput`, :class:`ParseError`,
    :class:`NonPositivePrice` or :class:`TimestampRegression`. Line numbers
    in errors are 1-based file lines (the header is line 1).
    """
    fmt = fmt or ColumnFormat()
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        frame = pd.read_csv(
            path,
            sep=fmt.delimiter,
            usecols=[fmt.timestamp, fmt.price],
            dtype={fmt.timestamp: np.int64, fmt.price: np.float64},
            float_precision="round_trip",
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise EmptyInput(path) from None
    except (ValueError, TypeError, OverflowError):
        _locate_parse_error(path, fmt)
        raise
    if len(frame) == 0:
        raise EmptyInput(path)
    if frame[fmt.price].isna().any():
        # empty cells arrive as NaN; report them as unparseable
        _locate_parse_error(path, fmt)
    return TickSeries(frame[fmt.timestamp].to_numpy(), frame[fmt.price].to_numpy())


def write_ticks(path, series: TickSeries, fmt: ColumnFormat | None = None) -> None:
    """Write a series so that :func:`load_ticks` reads it back bit-exactly."""
    fmt = fmt or ColumnFormat()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=fmt.delimiter, lineterminator="\n")
        w.writerow([fmt.timestamp, fmt.price])
        for t, p in zip(series.timestamps.tolist(), series.prices.tolist()):
            w.writerow([t, repr(p)])


def to_log_prices(series: TickSeries) -> np.ndarray:
    """Natural log of every price, same length and order."""
    out = np.log(series.prices)
    out.flags.writeable = False
    return out
