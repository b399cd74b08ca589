"""Classical Hurst-exponent estimators: periodogram PSD, rescaled range, MF-DFA.

All three consume series produced by the ingestion or synthesis layers and
reduce to a log-log slope: the PSD exponent pair (beta1, beta2) with
H = (1 + beta1) / 2, the R/S slope H, and the generalized H(q) surface of
which H(2) is the DFA estimate.  Every reduction uses a fixed summation
order so repeated runs are bit-identical.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy import stats

from .series import Series, UniformSeries, cumulative_profile

__all__ = [
    "PsdEstimate",
    "RsCurve",
    "MfdfaSurface",
    "HqFit",
    "default_frequency_grid",
    "periodogram",
    "average_daily_psd",
    "fit_two_regime_psd",
    "hurst_from_psd",
    "default_window_lengths",
    "rescaled_range",
    "DEFAULT_Q_VALUES",
    "mfdfa",
    "generalized_hurst",
]


# ---------------------------------------------------------------------------
# power spectral density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PsdEstimate:
    """Spectral density on a frequency grid, with optional two-regime fit."""

    frequencies: np.ndarray
    power: np.ndarray
    n_days_averaged: int = 1
    beta1: float | None = None
    beta2: float | None = None
    f_break: float | None = None
    fit_r2_low: float | None = None
    fit_r2_high: float | None = None

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        p = np.asarray(self.power, dtype=np.float64)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "power", p)
        if f.size != p.size:
            raise ValueError("frequency/power length mismatch")
        if f.size and (np.any(f <= 0) or np.any(np.diff(f) <= 0)):
            raise ValueError("frequencies must be positive and strictly increasing")


def default_frequency_grid(series: Series, n_points: int = 200) -> np.ndarray:
    """Log-spaced grid from 1/span up to half the mean event rate."""
    span = series.span
    if span <= 0:
        raise ValueError("series spans no time")
    rate = len(series) / span
    f_lo = 1.0 / span
    f_hi = rate / 2.0
    if f_hi <= f_lo:
        raise ValueError("series too short for a frequency grid")
    return np.geomspace(f_lo, f_hi, n_points)


def periodogram(series: Series, freq_grid=None) -> PsdEstimate:
    """Direct non-uniform periodogram, |sum_j x_j exp(i t_j f)|^2 / (2 pi span).

    The sum runs over the event points with their actual timestamps, so no
    resampling is needed; translation of all timestamps leaves the result
    unchanged.
    """
    if len(series) < 2:
        raise ValueError("periodogram needs at least 2 points")
    f = default_frequency_grid(series) if freq_grid is None else np.asarray(
        freq_grid, dtype=np.float64
    )
    if f.size == 0:
        raise ValueError("empty frequency grid")
    if np.any(f <= 0):
        raise ValueError("frequencies must be positive")
    span = series.span
    if span <= 0:
        raise ValueError("series spans no time")
    t = series.times
    x = series.values
    acc = np.zeros(f.size, dtype=np.complex128)
    chunk = 8192
    for lo in range(0, t.size, chunk):
        phase = t[lo : lo + chunk, None] * f[None, :]
        acc += x[lo : lo + chunk] @ np.exp(1j * phase)
    power = (acc.real**2 + acc.imag**2) / (2.0 * math.pi * span)
    return PsdEstimate(frequencies=f, power=power)


def average_daily_psd(daily_series: list[Series], freq_grid=None) -> PsdEstimate:
    """Arithmetic mean of per-day periodograms on one shared grid.

    Without an explicit grid the default grid of the first day is used for
    all days.
    """
    if not daily_series:
        raise ValueError("need at least one day")
    if freq_grid is None:
        freq_grid = default_frequency_grid(daily_series[0])
    acc = None
    for day in daily_series:
        p = periodogram(day, freq_grid).power
        acc = p if acc is None else acc + p
    return PsdEstimate(
        frequencies=np.asarray(freq_grid, dtype=np.float64),
        power=acc / len(daily_series),
        n_days_averaged=len(daily_series),
    )


class _LineFit(NamedTuple):
    slope: float
    intercept: float
    ssr: float
    r2: float
    stderr: float


def _fit_line(x: np.ndarray, y: np.ndarray) -> _LineFit:
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    ssr = float(resid @ resid)
    return _LineFit(float(res.slope), float(res.intercept), ssr,
                    float(res.rvalue) ** 2, float(res.stderr))


def fit_two_regime_psd(psd: PsdEstimate, min_points_per_side: int = 8) -> PsdEstimate:
    """Piecewise log-log fit S ~ f^-beta1 below a break and f^-beta2 above.

    The break is searched exhaustively over grid points leaving at least
    `min_points_per_side` usable points on each side; the split with the
    smallest total squared residual wins.  Returns a copy of `psd` with
    beta1, beta2, f_break and the per-side r^2 filled in.
    """
    usable = np.isfinite(psd.power) & (psd.power > 0)
    f = psd.frequencies[usable]
    p = psd.power[usable]
    if f.size < 2 * min_points_per_side:
        raise ValueError(
            f"need at least {2 * min_points_per_side} positive points, have {f.size}"
        )
    lf = np.log10(f)
    lp = np.log10(p)
    best = None
    for ib in range(min_points_per_side, f.size - min_points_per_side + 1):
        low = _fit_line(lf[:ib], lp[:ib])
        high = _fit_line(lf[ib:], lp[ib:])
        total = low.ssr + high.ssr
        if best is None or total < best[0]:
            best = (total, ib, low, high)
    _, ib, low, high = best
    return replace(
        psd,
        beta1=-low.slope,
        beta2=-high.slope,
        f_break=float(f[ib]),
        fit_r2_low=low.r2,
        fit_r2_high=high.r2,
    )


def hurst_from_psd(beta1: float) -> float:
    """H = (1 + beta1) / 2 from the low-frequency spectral exponent."""
    if not 0.0 <= beta1 <= 1.0:
        warnings.warn(
            f"beta1={beta1:.3g} outside [0, 1]; H estimate is extrapolated",
            stacklevel=2,
        )
    return (1.0 + beta1) / 2.0


# ---------------------------------------------------------------------------
# rescaled range
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RsCurve:
    """Mean rescaled range per window length and the fitted slope H."""

    n_values: np.ndarray
    rs_means: np.ndarray
    hurst: float
    slope_stderr: float
    r2: float


def default_window_lengths(
    n_samples: int, count: int = 16, n_min: int = 10, n_max: int | None = None
) -> np.ndarray:
    """Log-spaced window lengths from n_min up to n_samples / 4."""
    if n_max is None:
        n_max = n_samples // 4
    if n_max < n_min:
        raise ValueError(f"series too short for windows in [{n_min}, {n_max}]")
    ns = np.unique(np.geomspace(n_min, n_max, count).round().astype(int))
    return ns


def rescaled_range(u: UniformSeries, n_list=None) -> RsCurve:
    """Rescaled range curve over disjoint windows and its log-log slope.

    Per window: mean removed, cumulative deviations built, their range
    divided by the sample standard deviation; windows with zero deviation
    are skipped.  H is the least-squares slope of lg(R/S)_n against lg n.
    """
    x = u.values
    n_samples = x.size
    ns = default_window_lengths(n_samples) if n_list is None else np.asarray(
        n_list, dtype=int
    )
    if np.any(ns < 4) or np.any(ns > n_samples // 2):
        raise ValueError("window lengths must satisfy 4 <= n <= N/2")
    kept_n, kept_rs = [], []
    for n in ns:
        m = n_samples // n
        w = x[: m * n].reshape(m, n)
        s = w.std(axis=1, ddof=1)
        dev = np.cumsum(w - w.mean(axis=1, keepdims=True), axis=1)
        r = dev.max(axis=1) - dev.min(axis=1)
        ok = s > 0
        if not ok.any():
            warnings.warn(f"all windows degenerate at n={n}; dropped", stacklevel=2)
            continue
        kept_n.append(n)
        kept_rs.append(float(np.mean(r[ok] / s[ok])))
    if len(kept_n) < 3:
        raise ValueError(f"only {len(kept_n)} usable window lengths; need >= 3")
    kept_n = np.asarray(kept_n, dtype=np.float64)
    kept_rs = np.asarray(kept_rs, dtype=np.float64)
    fit = _fit_line(np.log10(kept_n), np.log10(kept_rs))
    return RsCurve(kept_n, kept_rs, fit.slope, fit.stderr, fit.r2)


# ---------------------------------------------------------------------------
# multifractal detrended fluctuation analysis
# ---------------------------------------------------------------------------

DEFAULT_Q_VALUES = np.array([-4, -3, -2, -1, -0.5, 0, 0.5, 1, 2, 3, 4], dtype=float)


@dataclass(frozen=True)
class MfdfaSurface:
    """Fluctuation function F_q(n) on a (q, n) grid."""

    q_values: np.ndarray
    n_values: np.ndarray
    fluctuation: np.ndarray  # shape (len(q_values), len(n_values))


class HqFit(NamedTuple):
    q_values: np.ndarray
    hurst: np.ndarray
    stderr: np.ndarray


def _box_variances(profile: np.ndarray, n: int) -> np.ndarray:
    """Residual variance of a line fit in each box of size n, both ends."""
    total = profile.size
    m = total // n
    fwd = profile[: m * n].reshape(m, n)
    bwd = profile[total - m * n :].reshape(m, n)
    seg = np.concatenate([fwd, bwd], axis=0)
    k = np.arange(n, dtype=np.float64)
    sk = k.sum()
    skk = float(k @ k)
    denom = n * skk - sk * sk
    sy = seg.sum(axis=1)
    sky = seg @ k
    slope = (n * sky - sk * sy) / denom
    intercept = (sy - slope * sk) / n
    resid = seg - (intercept[:, None] + slope[:, None] * k)
    return np.mean(resid * resid, axis=1)


def mfdfa(u: UniformSeries, n_list=None, q_list=None) -> MfdfaSurface:
    """q-th order fluctuation functions of the integrated series.

    Boxes of each size are taken from both ends of the profile so the
    trailing remainder is used; detrending is a least-squares line.  For
    q = 0 the logarithmic-average limit exp(mean(ln F^2) / 2) applies; for
    q <= 0 boxes with exactly zero residual variance are excluded.
    """
    profile = cumulative_profile(u).values
    n_samples = profile.size
    ns = (
        default_window_lengths(n_samples)
        if n_list is None
        else np.asarray(n_list, dtype=int)
    )
    if np.any(ns < 8) or np.any(ns > n_samples // 4):
        raise ValueError("box sizes must satisfy 8 <= n <= N/4")
    qs = DEFAULT_Q_VALUES if q_list is None else np.asarray(q_list, dtype=np.float64)
    out = np.empty((qs.size, ns.size))
    for j, n in enumerate(ns):
        f2 = _box_variances(profile, int(n))
        zero = f2 == 0.0
        if zero.any():
            warnings.warn(
                f"{int(zero.sum())} zero-variance boxes at n={n} excluded for q <= 0",
                stacklevel=2,
            )
        f2_pos = f2[~zero]
        for i, q in enumerate(qs):
            if q == 0.0:
                out[i, j] = math.exp(0.5 * np.mean(np.log(f2_pos)))
            elif q > 0.0:
                out[i, j] = np.mean(f2 ** (q / 2.0)) ** (1.0 / q)
            else:
                out[i, j] = np.mean(f2_pos ** (q / 2.0)) ** (1.0 / q)
    return MfdfaSurface(qs, ns.astype(np.float64), out)


def generalized_hurst(surface: MfdfaSurface) -> HqFit:
    """Per-q slope of lg F_q(n) against lg n, with standard errors.

    A q whose fluctuation values are degenerate (all equal or nonpositive)
    is reported as NaN.
    """
    ln = np.log10(surface.n_values)
    h = np.full(surface.q_values.size, np.nan)
    se = np.full(surface.q_values.size, np.nan)
    for i in range(surface.q_values.size):
        fq = surface.fluctuation[i]
        ok = np.isfinite(fq) & (fq > 0)
        if ok.sum() < 3:
            continue
        lf = np.log10(fq[ok])
        if np.all(lf == lf[0]):
            continue
        fit = _fit_line(ln[ok], lf)
        h[i] = fit.slope
        se[i] = fit.stderr
    return HqFit(surface.q_values, h, se)
