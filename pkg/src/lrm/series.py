"""Time-series containers and the uniform-grid transforms shared by all estimators.

Two kinds of series exist side by side: real-time series carry wall-clock
timestamps in seconds, event-time series advance one tick per order-book
change.  Estimator inputs are resampled onto uniform grids by
last-observation-carried-forward, which is exact for step-function signals
such as order dis-balance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

__all__ = [
    "TimeDomain",
    "Series",
    "UniformSeries",
    "resample_uniform",
    "cumulative_profile",
]


class TimeDomain(str, Enum):
    """Clock a series is defined on."""

    REAL_TIME_SECONDS = "real_time_seconds"
    EVENT_TICKS = "event_ticks"


def _as_readonly_f64(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim != 1:
        raise ValueError(f"expected 1-d array, got shape {out.shape}")
    if out is a and out.flags.writeable:
        out = out.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Series:
    """Ordered (time, value) pairs on one time domain.

    Parameters
    ----------
    domain : TimeDomain
        Whether `times` are seconds or event ticks.
    times : array_like
        Non-decreasing sample instants. Strictly increasing for
        deduplicated real-time series; 0, 1, 2, ... for event-tick series.
    values : array_like
        Sample values, same length as `times`.
    origin : dict
        Free-form provenance (symbol, dates, construction recipe).
    """

    domain: TimeDomain
    times: np.ndarray
    values: np.ndarray
    origin: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "times", _as_readonly_f64(self.times))
        object.__setattr__(self, "values", _as_readonly_f64(self.values))
        if self.times.shape != self.values.shape:
            raise ValueError(
                f"times/values length mismatch: {self.times.size} vs {self.values.size}"
            )
        if self.times.size > 1 and np.any(np.diff(self.times) < 0):
            raise ValueError("times must be non-decreasing")

    def __len__(self) -> int:
        return self.values.size

    @property
    def span(self) -> float:
        """Elapsed time between first and last sample."""
        if len(self) == 0:
            return 0.0
        return float(self.times[-1] - self.times[0])


@dataclass(frozen=True)
class UniformSeries:
    """Values on the implicit grid i * step, i = 0, 1, 2, ...

    The grid anchor (absolute time of index 0) is deliberately dropped:
    every estimator consuming a UniformSeries is translation invariant.
    """

    step: float
    values: np.ndarray
    domain: TimeDomain

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        object.__setattr__(self, "values", _as_readonly_f64(self.values))

    def __len__(self) -> int:
        return self.values.size

    def times(self) -> np.ndarray:
        """Implied sample instants i * step."""
        return np.arange(self.values.size, dtype=np.float64) * self.step

    def to_series(self, domain: TimeDomain | None = None) -> Series:
        return Series(domain or self.domain, self.times(), self.values)


def resample_uniform(series: Series, step: float) -> UniformSeries:
    """Sample a series onto a uniform grid by last observation carried forward.

    The grid starts at the first observation and extends while grid instants
    do not pass the last observation; no value interpolation is performed,
    so output values are a subset of input values.

    Raises
    ------
    ValueError
        If the series is empty or `step` is not positive.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if len(series) == 0:
        raise ValueError("cannot resample an empty series")
    t0 = series.times[0]
    span = series.times[-1] - t0
    n_grid = int(np.floor(span / step)) + 1
    grid = t0 + np.arange(n_grid, dtype=np.float64) * step
    # index of last observation at or before each grid instant
    idx = np.searchsorted(series.times, grid, side="right") - 1
    # grid starts at the first observation, so idx >= 0 everywhere
    values = series.values[idx]
    return UniformSeries(step=float(step), values=values, domain=series.domain)


def cumulative_profile(u: UniformSeries) -> UniformSeries:
    """Integrate a series after removing its mean.

    Output value i is the partial sum of (values - mean) up to i; the last
    output is zero up to floating-point error.
    """
    if len(u) < 2:
        raise ValueError("profile needs at least 2 points")
    centered = u.values - u.values.mean()
    return UniformSeries(step=u.step, values=np.cumsum(centered), domain=u.domain)
