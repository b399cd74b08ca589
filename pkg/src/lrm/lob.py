"""LOBSTER limit-order-book ingestion and order dis-balance series construction.

A trading day comes as a pair of headerless CSV files: ``..._message_K.csv``
with one row per book-changing event and ``..._orderbook_K.csv`` with the
book state after each event, row-aligned (4 columns per price level: ask
price, ask size, bid price, bid size).  Prices are integer units of
dollars x 10000; empty levels carry sentinel prices and are treated as
zero volume.

From the reconstructed depth this module derives the bounded order
dis-balance signal (bid volume minus ask volume over their sum, across the
top K levels), trims each day to start and end near zero, stitches days
into one long series, and converts between real time and event time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Any, Iterator

import numpy as np
import pandas as pd

from .series import Series, TimeDomain, resample_uniform

__all__ = [
    "EventKind",
    "Direction",
    "MessageEvent",
    "MessageLog",
    "DepthRow",
    "DepthSeries",
    "ParseError",
    "parse_message_file",
    "parse_orderbook_file",
    "load_day",
    "compute_disbalance",
    "build_disbalance_series",
    "trim_day",
    "stitch_days",
    "to_event_time",
    "flow_intensity",
    "midprice_return_series",
]

# Empty book levels are stored with these prices (and size 0) by the format.
SENTINEL_PRICE = 9_999_999_999

DEFAULT_TRIM_EPSILON = 0.05


class ParseError(ValueError):
    """Malformed input file; message names the offending line when known."""


class EventKind(IntEnum):
    """LOBSTER message type codes."""

    SUBMISSION = 1
    CANCELLATION = 2
    DELETION = 3
    EXECUTION_VISIBLE = 4
    EXECUTION_HIDDEN = 5
    TRADING_HALT = 7


class Direction(IntEnum):
    BUY = 1
    SELL = -1


@dataclass(frozen=True)
class MessageEvent:
    """One book-changing event."""

    time: float
    kind: int
    order_id: int
    size: int
    price: int
    direction: int


@dataclass
class MessageLog:
    """Column-oriented sequence of MessageEvent rows from one message file."""

    times: np.ndarray
    kinds: np.ndarray
    order_ids: np.ndarray
    sizes: np.ndarray
    prices: np.ndarray
    directions: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return self.times.size

    def __getitem__(self, i: int) -> MessageEvent:
        return MessageEvent(
            float(self.times[i]),
            int(self.kinds[i]),
            int(self.order_ids[i]),
            int(self.sizes[i]),
            int(self.prices[i]),
            int(self.directions[i]),
        )

    def __iter__(self) -> Iterator[MessageEvent]:
        return (self[i] for i in range(len(self)))


@dataclass(frozen=True)
class DepthRow:
    """One book snapshot: K levels of prices and volumes per side."""

    time: float
    ask_prices: np.ndarray
    ask_volumes: np.ndarray
    bid_prices: np.ndarray
    bid_volumes: np.ndarray

    @property
    def levels(self) -> int:
        return self.ask_prices.size

    def validate(self) -> None:
        """Check price ordering across occupied levels."""
        ask_occ = self.ask_prices[self.ask_volumes > 0]
        bid_occ = self.bid_prices[self.bid_volumes > 0]
        if ask_occ.size > 1 and np.any(np.diff(ask_occ) <= 0):
            raise ValueError("ask prices not strictly increasing over occupied levels")
        if bid_occ.size > 1 and np.any(np.diff(bid_occ) >= 0):
            raise ValueError("bid prices not strictly decreasing over occupied levels")


@dataclass
class DepthSeries:
    """Column-oriented sequence of DepthRow snapshots.

    `times` is None until row-aligned timestamps from the companion message
    file are attached.  Volume/price matrices have shape (n_rows, levels).
    """

    ask_prices: np.ndarray
    ask_volumes: np.ndarray
    bid_prices: np.ndarray
    bid_volumes: np.ndarray
    times: np.ndarray | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return self.ask_prices.shape[0]

    @property
    def levels(self) -> int:
        return self.ask_prices.shape[1]

    def __getitem__(self, i: int) -> DepthRow:
        t = float(self.times[i]) if self.times is not None else float("nan")
        return DepthRow(
            t,
            self.ask_prices[i],
            self.ask_volumes[i],
            self.bid_prices[i],
            self.bid_volumes[i],
        )

    def with_times(self, times: np.ndarray) -> "DepthSeries":
        times = np.asarray(times, dtype=np.float64)
        if times.size != len(self):
            raise ValueError(
                f"got {times.size} timestamps for {len(self)} depth rows"
            )
        return replace(self, times=times)

    def select(self, mask: np.ndarray) -> "DepthSeries":
        return DepthSeries(
            self.ask_prices[mask],
            self.ask_volumes[mask],
            self.bid_prices[mask],
            self.bid_volumes[mask],
            None if self.times is None else self.times[mask],
            dict(self.meta),
        )


def _read_numeric_csv(path: str | Path, expected_cols: int | None) -> pd.DataFrame:
    """Read a headerless numeric CSV, raising ParseError with a line number."""
    try:
        df = pd.read_csv(path, header=None, dtype=np.float64)
    except pd.errors.EmptyDataError:
        return pd.DataFrame()
    except (ValueError, pd.errors.ParserError) as exc:
        # pandas reports "... in line N" / "... line N" for ragged or
        # non-numeric rows; pass its diagnosis through.
        raise ParseError(f"{path}: {exc}") from exc
    if expected_cols is not None and df.shape[1] != expected_cols:
        raise ParseError(
            f"{path}: expected {expected_cols} columns, found {df.shape[1]}"
        )
    if df.isna().any().any():
        bad = int(df.index[df.isna().any(axis=1)][0]) + 1
        raise ParseError(f"{path}: malformed row at line {bad}")
    return df


def parse_message_file(path: str | Path) -> MessageLog:
    """Parse a LOBSTER message file (time, type, order id, size, price, direction).

    Rows are kept in file order.  A non-monotone timestamp is recorded in
    the metadata and warned about, but the row is kept.
    """
    df = _read_numeric_csv(path, expected_cols=6)
    if df.empty:
        return MessageLog(
            *(np.empty(0, dtype=dt) for dt in (np.float64,) + (np.int64,) * 5),
            meta={"path": str(path), "rows": 0, "non_monotone_times": 0},
        )
    a = df.to_numpy()
    times = a[:, 0]
    non_monotone = int(np.sum(np.diff(times) < 0))
    if non_monotone:
        warnings.warn(
            f"{path}: {non_monotone} rows with decreasing timestamps (kept)",
            stacklevel=2,
        )
    return MessageLog(
        times=times.copy(),
        kinds=a[:, 1].astype(np.int64),
        order_ids=a[:, 2].astype(np.int64),
        sizes=a[:, 3].astype(np.int64),
        prices=a[:, 4].astype(np.int64),
        directions=a[:, 5].astype(np.int64),
        meta={"path": str(path), "rows": len(df), "non_monotone_times": non_monotone},
    )


def parse_orderbook_file(
    path: str | Path, levels: int = 10, times: np.ndarray | None = None
) -> DepthSeries:
    """Parse a LOBSTER orderbook file with 4 * levels columns.

    Sentinel prices marking empty levels are mapped to volume 0.  Pass the
    companion message file's timestamps as `times` to label the rows.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    df = _read_numeric_csv(path, expected_cols=4 * levels)
    if df.empty:
        depth = DepthSeries(
            *(np.empty((0, levels), dtype=np.int64) for _ in range(4)),
            meta={"path": str(path), "rows": 0},
        )
        return depth if times is None else depth.with_times(times)
    a = df.to_numpy()
    ask_prices = a[:, 0::4].astype(np.int64)
    ask_volumes = a[:, 1::4].astype(np.int64)
    bid_prices = a[:, 2::4].astype(np.int64)
    bid_volumes = a[:, 3::4].astype(np.int64)
    if np.any(ask_volumes < 0) or np.any(bid_volumes < 0):
        bad = int(
            np.flatnonzero((ask_volumes < 0).any(axis=1) | (bid_volumes < 0).any(axis=1))[0]
        )
        raise ParseError(f"{path}: negative volume at line {bad + 1}")
    ask_volumes[np.abs(ask_prices) >= SENTINEL_PRICE] = 0
    bid_volumes[np.abs(bid_prices) >= SENTINEL_PRICE] = 0
    depth = DepthSeries(
        ask_prices,
        ask_volumes,
        bid_prices,
        bid_volumes,
        meta={"path": str(path), "rows": len(df)},
    )
    return depth if times is None else depth.with_times(times)


def load_day(
    message_path: str | Path, orderbook_path: str | Path, levels: int = 10
) -> tuple[MessageLog, DepthSeries]:
    """Load one day's file pair, cross-checking row alignment.

    Trading-halt rows are kept here (the row counts must match the raw
    files); they are dropped when the dis-balance series are built.
    """
    messages = parse_message_file(message_path)
    depth = parse_orderbook_file(orderbook_path, levels)
    if len(messages) != len(depth):
        raise ParseError(
            f"row mismatch: {len(messages)} messages vs {len(depth)} depth rows "
            f"({message_path} / {orderbook_path})"
        )
    return messages, depth.with_times(messages.times)


def compute_disbalance(row: DepthRow) -> float:
    """Order dis-balance of one snapshot: (bid - ask) / (bid + ask) volume.

    Always in [-1, 1].  Raises on an empty book (caller skips such rows).
    """
    bid = int(row.bid_volumes.sum())
    ask = int(row.ask_volumes.sum())
    total = bid + ask
    if total <= 0:
        raise ValueError("empty book")
    return (bid - ask) / total


def _disbalance_columns(depth: DepthSeries) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized dis-balance for every row plus the non-empty-book mask."""
    bid = depth.bid_volumes.sum(axis=1, dtype=np.int64)
    ask = depth.ask_volumes.sum(axis=1, dtype=np.int64)
    total = bid + ask
    occupied = total > 0
    x = np.zeros(len(depth), dtype=np.float64)
    np.divide(bid - ask, total, out=x, where=occupied)
    return x, occupied


def build_disbalance_series(
    depth: DepthSeries,
    *,
    dedup: bool = True,
    skip_kinds: np.ndarray | None = None,
    origin: dict | None = None,
) -> Series:
    """Dis-balance value per snapshot with a non-empty book.

    With `dedup` (the real-time convention) runs of rows sharing one
    timestamp collapse to the last row, the book state after all
    simultaneous updates.  Event-time analysis consumes every book change:
    build with ``dedup=False`` and convert via :func:`to_event_time`.
    `skip_kinds` is a boolean mask of rows to drop (e.g. trading halts).
    """
    if depth.times is None:
        raise ValueError("depth rows carry no timestamps; attach message times first")
    x, keep = _disbalance_columns(depth)
    if skip_kinds is not None:
        keep &= ~skip_kinds
    t = depth.times[keep]
    x = x[keep]
    if dedup and t.size > 1:
        last = np.append(np.diff(t) > 0, True)
        t, x = t[last], x[last]
    if x.size and (x.min() < -1.0 or x.max() > 1.0):
        raise AssertionError("dis-balance out of [-1, 1]")
    return Series(TimeDomain.REAL_TIME_SECONDS, t, x, origin=dict(origin or {}))


def trim_day(series: Series, epsilon: float = DEFAULT_TRIM_EPSILON) -> Series:
    """Cut a daily series so it starts and ends with values within epsilon of zero.

    Raises
    ------
    ValueError
        If no point satisfies |x| <= epsilon (returning an empty series
        would silently drop the day).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    near_zero = np.flatnonzero(np.abs(series.values) <= epsilon)
    if near_zero.size == 0:
        raise ValueError(
            f"series never near zero at tolerance {epsilon} (cannot trim)"
        )
    lo, hi = near_zero[0], near_zero[-1] + 1
    return Series(
        series.domain, series.times[lo:hi], series.values[lo:hi], dict(series.origin)
    )


def stitch_days(days: list[Series]) -> Series:
    """Concatenate trimmed daily series into one continuing series.

    Real-time days are re-based so each day starts one median intra-day
    inter-event gap after the previous day's end; values are concatenated
    unmodified.  Event-tick days are renumbered 0..N-1.  Day boundary
    indices land in the origin metadata.
    """
    if not days:
        return Series(TimeDomain.REAL_TIME_SECONDS, [], [], {"day_boundaries": []})
    domain = days[0].domain
    if any(d.domain != domain for d in days):
        raise ValueError("cannot stitch series from different time domains")
    values = np.concatenate([d.values for d in days])
    boundaries = np.cumsum([0] + [len(d) for d in days[:-1]]).tolist()
    if domain == TimeDomain.EVENT_TICKS:
        times = np.arange(values.size, dtype=np.float64)
    else:
        chunks = []
        t_end = None
        for d in days:
            t = d.times - d.times[0]
            gaps = np.diff(d.times)
            gap = float(np.median(gaps)) if gaps.size else 1.0
            if gap <= 0:
                gap = 1.0
            offset = 0.0 if t_end is None else t_end + gap
            chunks.append(t + offset)
            t_end = float(t[-1] + offset)
        times = np.concatenate(chunks)
    origin = dict(days[0].origin)
    origin["day_boundaries"] = boundaries
    origin["days"] = len(days)
    return Series(domain, times, values, origin)


def to_event_time(series: Series) -> Series:
    """Re-index a series onto the event clock: point i happens at tick i."""
    n = len(series)
    return Series(
        TimeDomain.EVENT_TICKS,
        np.arange(n, dtype=np.float64),
        series.values,
        dict(series.origin),
    )


def flow_intensity(series: Series) -> float:
    """Order-flow intensity in events per hour (times must be in seconds)."""
    span = series.span
    if span <= 0:
        raise ValueError("series spans no time; intensity undefined")
    return len(series) / (span / 3600.0)


def midprice_return_series(
    depth: DepthSeries,
    step: float,
    domain: TimeDomain = TimeDomain.REAL_TIME_SECONDS,
) -> Series:
    """Absolute log returns of the mid-price on a uniform grid.

    The mid-price (mean of the best ask and best bid) is taken from rows
    where both sides of level 1 are occupied, sampled by last observation
    carried forward every `step` seconds (or ticks), and differenced:
    x_i = |log m(t_i) - log m(t_(i-1))|.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    ok = (depth.ask_volumes[:, 0] > 0) & (depth.bid_volumes[:, 0] > 0)
    if domain == TimeDomain.EVENT_TICKS:
        t = np.arange(len(depth), dtype=np.float64)[ok]
    else:
        if depth.times is None:
            raise ValueError("depth rows carry no timestamps")
        t = depth.times[ok]
    mid = (depth.ask_prices[ok, 0] + depth.bid_prices[ok, 0]) / 2.0
    grid = resample_uniform(Series(domain, t, mid), step)
    if len(grid) < 2:
        raise ValueError("fewer than 2 grid points; shrink the step")
    r = np.abs(np.diff(np.log(grid.values)))
    t0 = t[0]
    times = t0 + (np.arange(1, len(grid), dtype=np.float64)) * step
    return Series(domain, times, r, {"kind": "abs_log_return", "step": step})
