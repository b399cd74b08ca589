"""Burst and inter-burst duration analysis.

A burst is the stretch a series spends above a threshold between two
passages, an inter-burst the stretch below.  For a process with correlated
increments the duration distribution follows P(T) ~ T^(H-2), so the
log-log slope gamma of the duration histogram yields H = 2 - gamma; a
Markov process pins gamma at 3/2 regardless of how power-law its other
statistics look, which is what makes the duration test discriminate true
from spurious long-range memory.  Durations are exactly invariant under
monotone transformations of the series, so the estimate does not care
about the marginal distribution.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import stats

from .series import Series, TimeDomain, UniformSeries

__all__ = [
    "SideOfThreshold",
    "DurationKind",
    "CrossingSequence",
    "DurationSet",
    "LogBinnedPdf",
    "PowerLawFit",
    "FitRegion",
    "threshold_passages",
    "extract_durations",
    "merge_durations",
    "log_binned_pdf",
    "fit_powerlaw_region",
    "select_fit_region",
    "hurst_from_bda",
    "bda_pipeline",
    "BdaResult",
    "default_thresholds",
]

DEFAULT_BINS_PER_DECADE = 10
# log-log fit windows must span at least this many decades of T
_MIN_REGION_DECADES = 2.0
_MIN_REGION_BINS = 5


class SideOfThreshold(str, Enum):
    BELOW = "below"
    ABOVE = "above"


class DurationKind(str, Enum):
    BURST = "burst"
    INTERBURST = "interburst"
    POOLED = "pooled"


@dataclass(frozen=True)
class CrossingSequence:
    """Ordered threshold passage instants; sides alternate by construction."""

    threshold: float
    times: np.ndarray
    first_side: SideOfThreshold | None  # side occupied before times[0]

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class DurationSet:
    """Multiset of burst or inter-burst durations for one threshold."""

    kind: DurationKind
    durations: np.ndarray
    threshold: float
    domain: TimeDomain
    series_length: int

    def __len__(self) -> int:
        return self.durations.size


def _series_arrays(series: Series | UniformSeries) -> tuple[np.ndarray, np.ndarray, TimeDomain]:
    if isinstance(series, UniformSeries):
        return series.times(), series.values, series.domain
    return series.times, series.values, series.domain


def threshold_passages(series: Series | UniformSeries, h: float) -> CrossingSequence:
    """Detect threshold passages of a sampled path.

    A passage lands on the first sample observed on the new side; samples
    exactly equal to the threshold adopt the side of the previous sample,
    so touching the threshold never produces a crossing (and zero-length
    durations cannot occur).  A series that never crosses yields an empty
    sequence.
    """
    t, x, domain = _series_arrays(series)
    if x.size < 2:
        raise ValueError("need at least 2 samples to detect passages")
    s = np.sign(x - h)
    nonzero = np.flatnonzero(s)
    if nonzero.size == 0:
        return CrossingSequence(h, np.empty(0), None)
    # ties adopt the previous defined side: forward-fill the sign
    filled_idx = np.maximum.accumulate(
        np.where(s != 0, np.arange(s.size), -1)
    )
    side = np.where(filled_idx >= 0, s[np.maximum(filled_idx, 0)], 0.0)
    flips = np.flatnonzero((side[1:] != side[:-1]) & (side[:-1] != 0)) + 1
    first = SideOfThreshold.BELOW if s[nonzero[0]] < 0 else SideOfThreshold.ABOVE
    return CrossingSequence(h, t[flips].astype(np.float64), first)


def extract_durations(
    crossings: CrossingSequence,
    domain: TimeDomain = TimeDomain.REAL_TIME_SECONDS,
    series_length: int = 0,
) -> tuple[DurationSet, DurationSet]:
    """Split passage gaps into burst and inter-burst duration multisets.

    The open stretches before the first and after the last passage are
    discarded: their full lengths were not observed.
    """
    gaps = np.diff(crossings.times)
    if crossings.first_side is SideOfThreshold.BELOW:
        burst, inter = gaps[0::2], gaps[1::2]
    else:
        burst, inter = gaps[1::2], gaps[0::2]
    h = crossings.threshold
    return (
        DurationSet(DurationKind.BURST, burst, h, domain, series_length),
        DurationSet(DurationKind.INTERBURST, inter, h, domain, series_length),
    )


def merge_durations(sets: list[DurationSet], kind: DurationKind = DurationKind.POOLED) -> DurationSet:
    """Pool several duration multisets (e.g. bursts + inter-bursts)."""
    if not sets:
        raise ValueError("nothing to merge")
    return DurationSet(
        kind,
        np.concatenate([s.durations for s in sets]),
        sets[0].threshold,
        sets[0].domain,
        max(s.series_length for s in sets),
    )


@dataclass(frozen=True)
class LogBinnedPdf:
    """Histogram density on geometric bins (density = count / (N * width))."""

    bin_edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray
    n_total: int

    @property
    def centers(self) -> np.ndarray:
        return np.sqrt(self.bin_edges[:-1] * self.bin_edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)


def log_binned_pdf(ds: DurationSet, bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> LogBinnedPdf:
    """Estimate the duration PDF on geometrically spaced bins.

    Empty bins are retained with density 0; the density integrates to 1
    over the support by construction.
    """
    if bins_per_decade < 2:
        raise ValueError("bins_per_decade must be >= 2")
    T = ds.durations
    if T.size == 0:
        raise ValueError("empty duration set")
    t_min, t_max = float(T.min()), float(T.max())
    if t_min <= 0:
        raise ValueError("durations must be positive")
    if t_min == t_max:
        raise ValueError("degenerate support: single distinct duration value")
    n_bins = max(1, math.ceil(np.log10(t_max / t_min) * bins_per_decade))
    edges = np.geomspace(t_min, t_max, n_bins + 1)
    counts, _ = np.histogram(T, edges)
    densities = counts / (T.size * np.diff(edges))
    return LogBinnedPdf(edges, counts, densities, int(T.size))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares log-log fit of a density over [t_lo, t_hi]."""

    gamma: float
    t_lo: float
    t_hi: float
    stderr: float
    r2: float
    n_bins: int
    full_support_fallback: bool = False


def fit_powerlaw_region(
    pdf: LogBinnedPdf, region: tuple[float, float], *, fallback: bool = False
) -> PowerLawFit:
    """Fit density ~ T^-gamma over the nonzero bins whose centers fall in region."""
    t_lo, t_hi = region
    if not t_lo < t_hi:
        raise ValueError("need t_lo < t_hi")
    c = pdf.centers
    ok = (pdf.counts > 0) & (c >= t_lo) & (c <= t_hi)
    if ok.sum() < _MIN_REGION_BINS:
        raise ValueError(
            f"only {int(ok.sum())} nonzero bins in [{t_lo:g}, {t_hi:g}]; "
            f"need >= {_MIN_REGION_BINS}"
        )
    res = stats.linregress(np.log10(c[ok]), np.log10(pdf.densities[ok]))
    return PowerLawFit(
        gamma=-float(res.slope),
        t_lo=float(t_lo),
        t_hi=float(t_hi),
        stderr=float(res.stderr),
        r2=float(res.rvalue) ** 2,
        n_bins=int(ok.sum()),
        full_support_fallback=fallback,
    )


class FitRegion(NamedTuple):
    t_lo: float
    t_hi: float
    fallback: bool


def select_fit_region(pdf: LogBinnedPdf, min_t: float | None = None) -> FitRegion:
    """Pick the fit window: the contiguous bin span of >= 2 decades with best r^2.

    Ties break toward the widest window, then the largest lower edge.
    `min_t` drops bins below a resolution floor (e.g. durations under two
    sample steps).  If no window spans two decades the full eligible
    support is returned with the fallback flag set.
    """
    c = pdf.centers
    eligible = pdf.counts > 0
    if min_t is not None:
        eligible &= c >= min_t
    idx = np.flatnonzero(eligible)
    if idx.size < 12:
        raise ValueError(f"only {idx.size} usable bins; need >= 12")
    lg_c = np.log10(c)
    lg_d = np.log10(pdf.densities[idx])
    lg_ci = lg_c[idx]
    best = None  # (r2, width_decades, t_lo, t_hi)
    for a in range(idx.size - _MIN_REGION_BINS + 1):
        for b in range(a + _MIN_REGION_BINS - 1, idx.size):
            width = lg_ci[b] - lg_ci[a]
            if width < _MIN_REGION_DECADES:
                continue
            seg_x = lg_ci[a : b + 1]
            seg_y = lg_d[a : b + 1]
            res = stats.linregress(seg_x, seg_y)
            r2 = float(res.rvalue) ** 2
            t_lo = pdf.bin_edges[idx[a]]
            key = (r2, width, t_lo)
            if best is None or key > best[0]:
                best = (key, float(t_lo), float(pdf.bin_edges[idx[b] + 1]))
    if best is None:
        warnings.warn(
            "no bin window spans two decades; falling back to full support",
            stacklevel=2,
        )
        return FitRegion(float(pdf.bin_edges[idx[0]]), float(pdf.bin_edges[idx[-1] + 1]), True)
    return FitRegion(best[1], best[2], False)


def hurst_from_bda(fit: PowerLawFit) -> float:
    """H = 2 - gamma; the standard error carries over unchanged."""
    if not 1.0 <= fit.gamma <= 2.0:
        warnings.warn(
            f"gamma={fit.gamma:.3g} outside [1, 2]; H estimate leaves the model range",
            stacklevel=2,
        )
    return 2.0 - fit.gamma


@dataclass(frozen=True)
class BdaResult:
    """One (threshold, duration-kind) analysis outcome."""

    threshold: float
    kind: DurationKind
    n_durations: int
    pdf: LogBinnedPdf | None = None
    fit: PowerLawFit | None = None
    hurst: float | None = None
    error: str | None = None
    min_fit_duration: float | None = None


def default_thresholds(values: np.ndarray) -> list[float]:
    """Thresholds at the 45/50/55 % quantiles of the series, plus zero."""
    qs = np.quantile(values, [0.45, 0.50, 0.55])
    out = [float(q) for q in qs]
    if not any(q == 0.0 for q in out):
        out.append(0.0)
    return out


def _sample_step(series: Series | UniformSeries) -> float:
    if isinstance(series, UniformSeries):
        return series.step
    gaps = np.diff(series.times)
    gaps = gaps[gaps > 0]
    return float(np.median(gaps)) if gaps.size else 1.0


def bda_pipeline(
    series: Series | UniformSeries,
    thresholds=None,
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
) -> list[BdaResult]:
    """Passages -> durations -> log-binned PDF -> region -> fit -> H.

    Runs per threshold for bursts, inter-bursts and the pooled set;
    failures (too few durations, degenerate support) are reported in the
    per-result error field without aborting the other thresholds.
    Durations shorter than two sample steps are kept in the PDFs but
    excluded from the fit window (discreteness floor).
    """
    t, x, domain = _series_arrays(series)
    if thresholds is None:
        thresholds = default_thresholds(x)
    step = _sample_step(series)
    floor = 2.0 * step
    results: list[BdaResult] = []
    for h in thresholds:
        crossings = threshold_passages(series, float(h))
        burst, inter = extract_durations(crossings, domain, x.size)
        pooled = merge_durations([burst, inter]) if len(crossings) >= 2 else None
        for ds in (burst, inter, pooled):
            if ds is None:
                continue
            base = dict(threshold=float(h), kind=ds.kind, n_durations=len(ds),
                        min_fit_duration=floor)
            try:
                pdf = log_binned_pdf(ds, bins_per_decade)
                region = select_fit_region(pdf, min_t=floor)
                fit = fit_powerlaw_region(
                    pdf, (region.t_lo, region.t_hi), fallback=region.fallback
                )
                results.append(
                    BdaResult(pdf=pdf, fit=fit, hurst=hurst_from_bda(fit), **base)
                )
            except ValueError as exc:
                results.append(BdaResult(error=str(exc), **base))
    return results
