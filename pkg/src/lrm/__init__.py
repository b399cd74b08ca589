"""Long-range memory toolkit for order-book time series.

Reconstructs order dis-balance series from LOBSTER data and estimates the
Hurst exponent four independent ways: periodogram PSD, rescaled range,
MF-DFA, and burst/inter-burst duration analysis, validated against exact
synthetic generators of true (fBm) and spurious (nonlinear SDE) long-range
memory.
"""

from .series import (
    Series,
    TimeDomain,
    UniformSeries,
    cumulative_profile,
    resample_uniform,
)
from .lob import (
    DepthRow,
    DepthSeries,
    Direction,
    EventKind,
    MessageEvent,
    MessageLog,
    ParseError,
    build_disbalance_series,
    compute_disbalance,
    flow_intensity,
    load_day,
    midprice_return_series,
    parse_message_file,
    parse_orderbook_file,
    stitch_days,
    to_event_time,
    trim_day,
)
from .estimators import (
    HqFit,
    MfdfaSurface,
    PsdEstimate,
    RsCurve,
    average_daily_psd,
    fit_two_regime_psd,
    generalized_hurst,
    hurst_from_psd,
    mfdfa,
    periodogram,
    rescaled_range,
)
from .bda import (
    BdaResult,
    CrossingSequence,
    DurationKind,
    DurationSet,
    LogBinnedPdf,
    PowerLawFit,
    bda_pipeline,
    extract_durations,
    fit_powerlaw_region,
    hurst_from_bda,
    log_binned_pdf,
    select_fit_region,
    threshold_passages,
)
from .synth import (
    FbmSpec,
    OutputKind,
    SdeSpec,
    gen_brownian,
    gen_fbm,
    gen_nonlinear_sde,
)
from .cache import read_series, write_series

__version__ = "0.1.0"
