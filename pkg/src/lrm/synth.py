"""Ground-truth generators used to validate every estimator.

Fractional Gaussian noise comes from circulant embedding of the exact
autocovariance (O(N log N), which matters because duration statistics need
millions of points), so sample paths have the exact target covariance, not
an approximation.  The spurious-memory reference process is a nonlinear
SDE with multiplicative noise and reflecting boundaries: it produces
power-law distributions and 1/f-like spectra while remaining Markovian,
the canonical false positive for long-range memory estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .series import Series, TimeDomain, UniformSeries

__all__ = [
    "OutputKind",
    "FbmSpec",
    "SdeSpec",
    "fgn_autocovariance",
    "gen_fbm",
    "gen_brownian",
    "gen_nonlinear_sde",
    "sde_stationary_pdf",
]

_EIGEN_TOL = 1e-8
_NORMAL_CHUNK = 1 << 22


class OutputKind(str, Enum):
    MOTION = "motion"
    INCREMENTS = "increments"


@dataclass(frozen=True)
class FbmSpec:
    """Fractional Brownian motion sample request.

    hurst in (0, 1); n must be a power of two (the embedding is exact and
    guaranteed nonnegative-definite under standard doubling); same seed
    gives bit-identical output.
    """

    hurst: float
    n: int
    seed: int = 0
    output_kind: OutputKind = OutputKind.MOTION

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must be in (0, 1), got {self.hurst}")
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 2, got {self.n}")


def fgn_autocovariance(hurst: float, lags) -> np.ndarray:
    """Exact autocovariance of unit-variance fractional Gaussian noise."""
    k = np.abs(np.asarray(lags, dtype=np.float64))
    h2 = 2.0 * hurst
    return 0.5 * ((k + 1) ** h2 - 2 * k**h2 + np.abs(k - 1) ** h2)


# Eigenvalues of the 2N circulant depend only on (hurst, n); keep the most
# recent few around so ensemble runs do not recompute the FFT each seed.
_eigen_cache: dict[tuple[float, int], np.ndarray] = {}


def _circulant_eigenvalues(hurst: float, n: int) -> np.ndarray:
    key = (hurst, n)
    lam = _eigen_cache.get(key)
    if lam is not None:
        return lam
    gamma = fgn_autocovariance(hurst, np.arange(n + 1))
    # first circulant row: gamma(0..n), gamma(n-1..1); length 2n
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -_EIGEN_TOL * lam.max():
        raise ValueError(
            f"circulant embedding not nonnegative definite for H={hurst}, n={n} "
            f"(min eigenvalue {lam.min():.3e})"
        )
    lam = np.clip(lam, 0.0, None)
    lam.flags.writeable = False
    while len(_eigen_cache) >= 4:
        _eigen_cache.pop(next(iter(_eigen_cache)))
    _eigen_cache[key] = lam
    return lam


def gen_fbm(spec: FbmSpec) -> UniformSeries:
    """Sample exact fGn (and its cumulative sum) by circulant embedding."""
    n = spec.n
    lam = _circulant_eigenvalues(spec.hurst, n)
    m = 2 * n
    rng = np.random.default_rng(spec.seed)
    g = rng.standard_normal(m)
    w = np.zeros(m, dtype=np.complex128)
    w[0] = math.sqrt(lam[0]) * g[0]
    w[n] = math.sqrt(lam[n]) * g[1]
    half = np.sqrt(lam[1:n] / 2.0)
    w[1:n] = half * (g[2::2] + 1j * g[3::2])
    w[n + 1 :] = np.conj(w[1:n][::-1])
    fgn = np.fft.fft(w).real[:n] / math.sqrt(m)
    values = np.cumsum(fgn) if spec.output_kind == OutputKind.MOTION else fgn
    return UniformSeries(step=1.0, values=values, domain=TimeDomain.EVENT_TICKS)


def gen_brownian(n: int, seed: int = 0) -> UniformSeries:
    """Plain Brownian motion: fBm at H = 1/2."""
    return gen_fbm(FbmSpec(hurst=0.5, n=n, seed=seed, output_kind=OutputKind.MOTION))


@dataclass(frozen=True)
class SdeSpec:
    """Nonlinear SDE sample request.

    The process integrates dx = (eta - lam/2) x^(2 eta - 1) dt + x^eta dW
    between reflecting boundaries, which has stationary density
    proportional to x^(-lam) on [x_min, x_max].  `dt_scale` is the
    dimensionless kappa^2 controlling the adaptive Euler step
    kappa^2 * x^(2 - 2 eta); observations are emitted every
    dt_scale * x_min^(2 - 2 eta), the largest internal step.
    """

    eta: float = 2.5
    lam: float = 3.0
    x_min: float = 1.0
    x_max: float = 1e3
    dt_scale: float = 0.1
    n: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if self.x_min <= 0:
            raise ValueError("x_min must be positive")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.eta <= 1:
            raise ValueError("eta must exceed 1")
        if self.dt_scale <= 0:
            raise ValueError("dt_scale must be positive")
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @property
    def dt_observation(self) -> float:
        return self.dt_scale * self.x_min ** (2.0 - 2.0 * self.eta)


def sde_stationary_pdf(spec: SdeSpec, x) -> np.ndarray:
    """Analytic stationary density of the bounded nonlinear SDE."""
    x = np.asarray(x, dtype=np.float64)
    if spec.lam == 1.0:
        norm = math.log(spec.x_max / spec.x_min)
    else:
        e = 1.0 - spec.lam
        norm = (spec.x_max**e - spec.x_min**e) / e
    out = x ** (-spec.lam) / norm
    out[(x < spec.x_min) | (x > spec.x_max)] = 0.0
    return out


@njit(cache=True)
def _sde_steps_powi(x, t, t_next, i, out, dt_obs, drift, kappa, kappa2, a_int,
                    x_min, x_max, normals):  # pragma: no cover - jitted
    n_out = out.size
    for j in range(normals.size):
        dt = kappa2 * x**a_int
        if dt < 1e-12:
            return x, t, t_next, i, 1
        while t_next < t + dt and i < n_out:
            out[i] = x
            i += 1
            t_next += dt_obs
        if i >= n_out:
            return x, t, t_next, i, 0
        x = x + drift * x + kappa * x * normals[j]
        while x < x_min or x > x_max:
            if x < x_min:
                x = 2.0 * x_min - x
            else:
                x = 2.0 * x_max - x
        t += dt
    return x, t, t_next, i, 0


@njit(cache=True)
def _sde_steps_powf(x, t, t_next, i, out, dt_obs, drift, kappa, kappa2, a,
                    x_min, x_max, normals):  # pragma: no cover - jitted
    n_out = out.size
    for j in range(normals.size):
        dt = kappa2 * x**a
        if dt < 1e-12:
            return x, t, t_next, i, 1
        while t_next < t + dt and i < n_out:
            out[i] = x
            i += 1
            t_next += dt_obs
        if i >= n_out:
            return x, t, t_next, i, 0
        x = x + drift * x + kappa * x * normals[j]
        while x < x_min or x > x_max:
            if x < x_min:
                x = 2.0 * x_min - x
            else:
                x = 2.0 * x_max - x
        t += dt
    return x, t, t_next, i, 0


def gen_nonlinear_sde(spec: SdeSpec) -> Series:
    """Integrate the bounded nonlinear SDE and sample it on a uniform grid.

    The variable Euler step dt = kappa^2 x^(2-2 eta) shrinks where the
    diffusion is strong; boundary crossings reflect (x -> 2b - x).  The
    emitted series holds the state at every observation instant
    (sample-and-hold between internal steps).
    """
    a = 2.0 - 2.0 * spec.eta
    kappa2 = spec.dt_scale
    kappa = math.sqrt(kappa2)
    drift = kappa2 * (spec.eta - 0.5 * spec.lam)
    dt_obs = spec.dt_observation
    out = np.empty(spec.n, dtype=np.float64)

    x = 0.5 * (spec.x_min + min(spec.x_max, 3.0 * spec.x_min))
    t, t_next, i = 0.0, 0.0, 0
    rng = np.random.default_rng(spec.seed)
    a_int = int(round(a))
    use_powi = abs(a - a_int) < 1e-12
    while i < spec.n:
        normals = rng.standard_normal(_NORMAL_CHUNK)
        if use_powi:
            x, t, t_next, i, flag = _sde_steps_powi(
                x, t, t_next, i, out, dt_obs, drift, kappa, kappa2, a_int,
                spec.x_min, spec.x_max, normals
            )
        else:
            x, t, t_next, i, flag = _sde_steps_powf(
                x, t, t_next, i, out, dt_obs, drift, kappa, kappa2, a,
                spec.x_min, spec.x_max, normals
            )
        if flag:
            raise ValueError(
                "SDE step underflow (dt < 1e-12); increase dt_scale or lower x_max"
            )
    times = np.arange(spec.n, dtype=np.float64) * dt_obs
    return Series(
        TimeDomain.REAL_TIME_SECONDS,
        times,
        out,
        origin={
            "process": "nonlinear_sde",
            "eta": spec.eta,
            "lam": spec.lam,
            "x_min": spec.x_min,
            "x_max": spec.x_max,
            "dt_scale": spec.dt_scale,
            "dt_observation": dt_obs,
            "seed": spec.seed,
        },
    )
