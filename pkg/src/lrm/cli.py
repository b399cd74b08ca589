"""Batch command-line pipeline: ingest, synth, analyze, report.

`ingest` parses LOBSTER day files into stitched real-time and event-time
dis-balance series cached in the binary columnar format; `synth` writes
reference processes into the same cache so estimators consume empirical
and synthetic data identically; `analyze` runs the enabled estimators and
emits the table CSVs plus raw curves and a JSON fit summary; `report`
collects everything into one long-format Hurst comparison CSV.

Exit codes: 0 success, 1 configuration or I/O error, 2 partial estimator
failure.  All numeric output uses 17 significant digits and files are
written atomically, so re-running a configuration byte-reproduces it.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import traceback
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bda as bda_mod
from . import cache
from .estimators import (
    average_daily_psd,
    default_frequency_grid,
    fit_two_regime_psd,
    generalized_hurst,
    hurst_from_psd,
    mfdfa,
    periodogram,
    rescaled_range,
)
from .lob import (
    ParseError,
    build_disbalance_series,
    EventKind,
    load_day,
    stitch_days,
    to_event_time,
    trim_day,
)
from .series import Series, TimeDomain, resample_uniform
from .synth import FbmSpec, OutputKind, SdeSpec, gen_brownian, gen_fbm, gen_nonlinear_sde

__all__ = ["RunConfig", "main"]

ENV_DATA_DIR = "LRM_DATA_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2

_ESTIMATORS = ("psd", "rs", "dfa", "bda")


def _fmt(v) -> str:
    """One number, 17 significant digits (byte-reproducible output)."""
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    _write_atomic(path, "\n".join(lines) + "\n")


@dataclass
class RunConfig:
    """Everything one batch run needs; flags override config-file values."""

    data_dir: str = ""
    out: str = "out"
    symbols: list[str] = field(default_factory=list)
    levels: int = 10
    tau_real_seconds: list[float] = field(default_factory=lambda: [200.0])
    tau_event_ticks: list[float] = field(default_factory=lambda: [500.0, 2000.0])
    thresholds: list[str] = field(default_factory=lambda: ["q0.45", "q0.5", "q0.55", "0"])
    bins_per_decade: int = 10
    estimators: list[str] = field(default_factory=lambda: list(_ESTIMATORS))
    seed: int = 1
    threads: int = 1
    trim_epsilon: float = 0.05

    def validate(self) -> None:
        if not self.estimators:
            raise ValueError("at least one estimator must be enabled")
        unknown = set(self.estimators) - set(_ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")
        if any(t <= 0 for t in self.tau_real_seconds + self.tau_event_ticks):
            raise ValueError("tau values must be positive")
        if self.bins_per_decade < 2:
            raise ValueError("bins_per_decade must be >= 2")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    @property
    def cache_dir(self) -> Path:
        return self.out_dir / "cache"


def _parse_list(raw: str) -> list[str]:
    return [s for s in (p.strip() for p in raw.split(",")) if s]


def load_config_file(path: str | Path) -> dict[str, str]:
    """Flat key=value file; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    for ln, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    file_vals = load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_name: str, key: str, cast):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return cast(flag)
        if key in file_vals:
            return cast(file_vals[key])
        return None

    updates = {
        "data_dir": pick("data_dir", "data_dir", str),
        "out": pick("out", "out", str),
        "symbols": pick("symbols", "symbols", _parse_list),
        "levels": pick("levels", "levels", int),
        "tau_real_seconds": pick(
            "tau_real_seconds", "tau_real_seconds",
            lambda s: [float(x) for x in _parse_list(str(s))],
        ),
        "tau_event_ticks": pick(
            "tau_event_ticks", "tau_event_ticks",
            lambda s: [float(x) for x in _parse_list(str(s))],
        ),
        "thresholds": pick("thresholds", "thresholds", lambda s: _parse_list(str(s))),
        "bins_per_decade": pick("bins_per_decade", "bins_per_decade", int),
        "estimators": pick("estimators", "estimators", lambda s: _parse_list(str(s))),
        "seed": pick("seed", "seed", int),
        "threads": pick("threads", "threads", int),
        "trim_epsilon": pick("trim_epsilon", "trim_epsilon", float),
    }
    for k, v in updates.items():
        if v is not None:
            setattr(cfg, k, v)
    if not cfg.data_dir:
        cfg.data_dir = os.environ.get(ENV_DATA_DIR, "")
    cfg.validate()
    return cfg


def resolve_thresholds(spec_list: list[str], values: np.ndarray) -> list[float]:
    """Threshold specs: plain numbers, or q<p> for the p-quantile of the series."""
    out: list[float] = []
    for item in spec_list:
        if item.startswith("q"):
            out.append(float(np.quantile(values, float(item[1:]))))
        else:
            out.append(float(item))
    return out


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

def _manifest_path(cfg: RunConfig) -> Path:
    return cfg.cache_dir / "manifest.json"


def read_manifest(cfg: RunConfig) -> dict:
    path = _manifest_path(cfg)
    if path.exists():
        return json.loads(path.read_text())
    return {"series": {}}


def write_manifest(cfg: RunConfig, manifest: dict) -> None:
    _write_atomic(_manifest_path(cfg), json.dumps(manifest, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

_DAY_FILE = re.compile(
    r"(?P<symbol>[A-Z.]+)_(?P<date>\d{4}-\d{2}-\d{2})_(?P<start>\d+)_(?P<end>\d+)"
    r"_message_(?P<levels>\d+)\.csv$"
)


def discover_days(data_dir: Path, symbol: str, levels: int) -> list[tuple[str, Path, Path]]:
    """Date-sorted (date, message_path, orderbook_path) pairs for a symbol."""
    days = []
    for msg in sorted(data_dir.glob(f"{symbol}_*_message_{levels}.csv")):
        m = _DAY_FILE.match(msg.name)
        if not m or m.group("symbol") != symbol:
            continue
        ob = msg.with_name(msg.name.replace("_message_", "_orderbook_"))
        if ob.exists():
            days.append((m.group("date"), msg, ob))
    return sorted(days)


def ingest_symbol(cfg: RunConfig, symbol: str) -> dict:
    """Parse all day pairs of one symbol into stitched cached series."""
    days = discover_days(Path(cfg.data_dir), symbol, cfg.levels)
    if not days:
        raise FileNotFoundError(
            f"no {symbol} day files (levels={cfg.levels}) in {cfg.data_dir!r}"
        )
    real_days: list[Series] = []
    raw_days: list[Series] = []
    kept_dates: list[str] = []
    skipped: dict[str, str] = {}
    for date, msg_path, ob_path in days:
        try:
            messages, depth = load_day(msg_path, ob_path, cfg.levels)
            halt = messages.kinds == int(EventKind.TRADING_HALT)
            origin = {"symbol": symbol, "date": date}
            raw = build_disbalance_series(depth, dedup=False, skip_kinds=halt, origin=origin)
            real = build_disbalance_series(depth, dedup=True, skip_kinds=halt, origin=origin)
            raw_days.append(trim_day(raw, cfg.trim_epsilon))
            real_days.append(trim_day(real, cfg.trim_epsilon))
            kept_dates.append(date)
        except (ParseError, ValueError) as exc:
            skipped[date] = str(exc)
    if not real_days:
        raise RuntimeError(f"{symbol}: every day failed: {skipped}")
    stitched_real = stitch_days(real_days)
    stitched_event = to_event_time(stitch_days(raw_days))
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    cache.write_series(stitched_real, cfg.cache_dir / f"{symbol}_real{cache.CACHE_SUFFIX}")
    cache.write_series(stitched_event, cfg.cache_dir / f"{symbol}_event{cache.CACHE_SUFFIX}")
    return {
        "kind": "empirical",
        "symbol": symbol,
        "days": len(kept_dates),
        "dates": kept_dates,
        "period": f"{kept_dates[0]}..{kept_dates[-1]}",
        "points_real": len(stitched_real),
        "points_event": len(stitched_event),
        "day_boundaries_real": stitched_real.origin["day_boundaries"],
        "day_boundaries_event": to_event_time(stitch_days(raw_days)).origin["day_boundaries"],
        "skipped": skipped,
    }


def cmd_ingest(cfg: RunConfig) -> int:
    if not cfg.data_dir:
        print("ingest: no data directory (use --data-dir or LRM_DATA_DIR)", file=sys.stderr)
        return EXIT_CONFIG
    if not cfg.symbols:
        print("ingest: no symbols requested", file=sys.stderr)
        return EXIT_CONFIG
    manifest = read_manifest(cfg)
    failures = 0
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = {s: pool.submit(ingest_symbol, cfg, s) for s in cfg.symbols}
        for symbol in cfg.symbols:
            try:
                entry = futures[symbol].result()
                manifest["series"][symbol] = entry
                print(
                    f"ingest {symbol}: {entry['days']} days, "
                    f"{entry['points_real']} real / {entry['points_event']} event points"
                )
            except Exception as exc:
                failures += 1
                print(f"ingest {symbol}: FAILED: {exc}", file=sys.stderr)
    write_manifest(cfg, manifest)
    if failures == len(cfg.symbols):
        return EXIT_CONFIG
    return EXIT_OK if failures == 0 else EXIT_PARTIAL


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

def cmd_synth(cfg: RunConfig, args: argparse.Namespace) -> int:
    process = args.process
    name = args.name or f"{process}{args.hurst if process == 'fbm' else ''}".replace(".", "")
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    if process == "fbm":
        u = gen_fbm(FbmSpec(args.hurst, args.length, seed=cfg.seed,
                            output_kind=OutputKind(args.output_kind)))
        series = u.to_series()
        meta = {"process": "fbm", "hurst": args.hurst, "n": args.length,
                "seed": cfg.seed, "output_kind": args.output_kind}
        domain_tag = "event"
    elif process == "brownian":
        series = gen_brownian(args.length, seed=cfg.seed).to_series()
        meta = {"process": "brownian", "n": args.length, "seed": cfg.seed}
        domain_tag = "event"
    elif process == "sde":
        spec = SdeSpec(eta=args.eta, lam=args.lam, x_min=args.x_min,
                       x_max=args.x_max, dt_scale=args.dt_scale,
                       n=args.length, seed=cfg.seed)
        series = gen_nonlinear_sde(spec)
        meta = {"process": "sde", "n": args.length, "seed": cfg.seed,
                "eta": args.eta, "lam": args.lam, "x_min": args.x_min,
                "x_max": args.x_max, "dt_scale": args.dt_scale}
        domain_tag = "real"
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(process)
    path = cfg.cache_dir / f"{name}_{domain_tag}{cache.CACHE_SUFFIX}"
    cache.write_series(series, path)
    manifest = read_manifest(cfg)
    manifest["series"][name] = {
        "kind": "synthetic",
        "symbol": name,
        "period": "synthetic",
        f"points_{domain_tag}": len(series),
        **meta,
    }
    write_manifest(cfg, manifest)
    print(f"synth {name}: {len(series)} points -> {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _split_days(series: Series, boundaries: list[int]) -> list[Series]:
    if not boundaries:
        return [series]
    bounds = list(boundaries) + [len(series)]
    return [
        Series(series.domain, series.times[a:b], series.values[a:b])
        for a, b in zip(bounds[:-1], bounds[1:])
        if b - a >= 2
    ]


def _load_cached(cfg: RunConfig, name: str, domain_tag: str) -> Series | None:
    path = cfg.cache_dir / f"{name}_{domain_tag}{cache.CACHE_SUFFIX}"
    if not path.exists():
        return None
    return cache.read_series(path)


@dataclass
class SymbolAnalysis:
    symbol: str
    period: str
    psd_rows: list[list] = field(default_factory=list)
    rs_rows: list[list] = field(default_factory=list)
    dfa_rows: list[list] = field(default_factory=list)
    bda_rows: list[list] = field(default_factory=list)
    comparison: list[dict] = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)


def _taus_for(cfg: RunConfig, domain_tag: str) -> list[float]:
    return cfg.tau_real_seconds if domain_tag == "real" else cfg.tau_event_ticks


def _analyze_psd(cfg: RunConfig, an: SymbolAnalysis, series: Series,
                 entry: dict, domain_tag: str, out: Path) -> None:
    boundaries = entry.get(f"day_boundaries_{domain_tag}", [])
    days = _split_days(series, boundaries)
    psd = average_daily_psd(days) if len(days) > 1 else periodogram(series)
    psd = fit_two_regime_psd(psd)
    _write_csv(
        out / f"psd_{an.symbol}_{domain_tag}.csv",
        ["f", "power"],
        [[f, p] for f, p in zip(psd.frequencies, psd.power)],
    )
    h = hurst_from_psd(psd.beta1)
    an.fits[f"psd_{domain_tag}"] = {
        "beta1": psd.beta1, "beta2": psd.beta2, "f_break": psd.f_break,
        "r2_low": psd.fit_r2_low, "r2_high": psd.fit_r2_high,
        "n_days": psd.n_days_averaged, "H": h,
    }
    if domain_tag == "real":
        an.psd_rows.append([an.symbol, psd.beta1, psd.beta2, psd.f_break, h])
    an.comparison.append(
        {"method": "PSD", "domain": domain_tag, "H": h, "stderr": ""}
    )


def _analyze_rs_dfa(cfg: RunConfig, an: SymbolAnalysis, series: Series,
                    domain_tag: str, out: Path, want_rs: bool, want_dfa: bool) -> None:
    for tau in _taus_for(cfg, domain_tag):
        u = resample_uniform(series, tau)
        tau_label = _fmt(tau)
        if want_rs:
            rs = rescaled_range(u)
            _write_csv(
                out / f"rs_{an.symbol}_{domain_tag}_tau{tau_label}.csv",
                ["n", "rs_mean"],
                [[n, v] for n, v in zip(rs.n_values, rs.rs_means)],
            )
            an.rs_rows.append([an.symbol, domain_tag, tau, rs.hurst, rs.slope_stderr])
            an.fits[f"rs_{domain_tag}_tau{tau_label}"] = {
                "H": rs.hurst, "stderr": rs.slope_stderr, "r2": rs.r2,
            }
            an.comparison.append(
                {"method": "RS", "domain": domain_tag, "H": rs.hurst,
                 "stderr": rs.slope_stderr}
            )
        if want_dfa:
            surf = mfdfa(u)
            hq = generalized_hurst(surf)
            _write_csv(
                out / f"mfdfa_{an.symbol}_{domain_tag}_tau{tau_label}.csv",
                ["q", "n", "F"],
                [
                    [q, n, surf.fluctuation[i, j]]
                    for i, q in enumerate(surf.q_values)
                    for j, n in enumerate(surf.n_values)
                ],
            )
            i2 = int(np.argmin(np.abs(hq.q_values - 2.0)))
            an.dfa_rows.append(
                [an.symbol, domain_tag, tau, hq.hurst[i2], hq.stderr[i2]]
            )
            an.fits[f"dfa_{domain_tag}_tau{tau_label}"] = {
                "H2": hq.hurst[i2], "stderr": hq.stderr[i2],
                "H_of_q": {str(q): (None if np.isnan(h) else float(h))
                           for q, h in zip(hq.q_values, hq.hurst)},
            }
            an.comparison.append(
                {"method": "DFA", "domain": domain_tag, "H": hq.hurst[i2],
                 "stderr": hq.stderr[i2]}
            )


def _analyze_bda(cfg: RunConfig, an: SymbolAnalysis, series: Series,
                 domain_tag: str, out: Path) -> None:
    thresholds = resolve_thresholds(cfg.thresholds, series.values)
    results = bda_mod.bda_pipeline(series, thresholds, cfg.bins_per_decade)
    fit_blocks = []
    pooled_h = []
    pooled_gamma = []
    for res in results:
        tag = f"thr{_fmt(res.threshold)}_{res.kind.value}"
        if res.pdf is not None:
            _write_csv(
                out / f"bda_{an.symbol}_{domain_tag}_{tag}.csv",
                ["T_bin_center", "density", "count"],
                [
                    [c, d, int(k)]
                    for c, d, k in zip(res.pdf.centers, res.pdf.densities, res.pdf.counts)
                ],
            )
        block = {
            "threshold": res.threshold, "kind": res.kind.value,
            "n_durations": res.n_durations, "error": res.error,
        }
        if res.fit is not None:
            block.update(
                gamma=res.fit.gamma, H=res.hurst, T_lo=res.fit.t_lo,
                T_hi=res.fit.t_hi, stderr=res.fit.stderr, r2=res.fit.r2,
                full_support_fallback=res.fit.full_support_fallback,
            )
            if res.kind is bda_mod.DurationKind.POOLED:
                pooled_h.append((res.hurst, res.fit.stderr))
                pooled_gamma.append(res.fit.gamma)
        fit_blocks.append(block)
    an.fits[f"bda_{domain_tag}"] = fit_blocks
    if pooled_h:
        h_med = float(np.median([h for h, _ in pooled_h]))
        se_med = float(np.median([se for _, se in pooled_h]))
        gamma_med = float(np.median(pooled_gamma))
        an.bda_rows.append([an.symbol, domain_tag, h_med, gamma_med, se_med])
        an.comparison.append(
            {"method": "BDA", "domain": domain_tag, "H": h_med, "stderr": se_med}
        )
    else:
        an.errors.append(f"bda_{domain_tag}: no threshold produced a fit")


def analyze_symbol(cfg: RunConfig, symbol: str, entry: dict) -> SymbolAnalysis:
    out = cfg.out_dir
    an = SymbolAnalysis(symbol=symbol, period=entry.get("period", "?"))
    for domain_tag in ("real", "event"):
        series = _load_cached(cfg, symbol, domain_tag)
        if series is None:
            continue
        if "psd" in cfg.estimators:
            try:
                _analyze_psd(cfg, an, series, entry, domain_tag, out)
            except Exception as exc:
                an.errors.append(f"psd_{domain_tag}: {exc}")
        if "rs" in cfg.estimators or "dfa" in cfg.estimators:
            try:
                _analyze_rs_dfa(cfg, an, series, domain_tag, out,
                                "rs" in cfg.estimators, "dfa" in cfg.estimators)
            except Exception as exc:
                an.errors.append(f"rs/dfa_{domain_tag}: {exc}")
        if "bda" in cfg.estimators:
            try:
                _analyze_bda(cfg, an, series, domain_tag, out)
            except Exception as exc:
                an.errors.append(f"bda_{domain_tag}: {exc}")
    return an


def cmd_analyze(cfg: RunConfig) -> int:
    manifest = read_manifest(cfg)
    known = manifest.get("series", {})
    names = cfg.symbols or sorted(known)
    if not names:
        print("analyze: nothing cached and no symbols given", file=sys.stderr)
        return EXIT_CONFIG
    missing = [n for n in names if n not in known]
    if missing:
        print(f"analyze: not in cache manifest: {missing}", file=sys.stderr)
        return EXIT_CONFIG
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    analyses: dict[str, SymbolAnalysis] = {}
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = {
            name: pool.submit(analyze_symbol, cfg, name, known[name]) for name in names
        }
        for name in names:
            analyses[name] = futures[name].result()

    table1, table2, table3, comparison = [], [], [], []
    any_errors = False
    for name in sorted(analyses):
        an = analyses[name]
        table1 += an.psd_rows
        table2 += [[r[0], r[1], r[2], r[3], r[4], "", ""] for r in an.rs_rows]
        comparison += [
            [an.symbol, an.period, c["method"], c["domain"], c["H"], c["stderr"]]
            for c in an.comparison
        ]
        table3 += an.bda_rows
        _write_atomic(
            out / f"fits_{name}.json",
            json.dumps(an.fits, indent=2, sort_keys=True, default=float),
        )
        for err in an.errors:
            any_errors = True
            print(f"analyze {name}: {err}", file=sys.stderr)

    # merge R/S and DFA rows on (symbol, domain, tau)
    dfa_map = {
        (r[0], r[1], r[2]): (r[3], r[4])
        for an in analyses.values()
        for r in an.dfa_rows
    }
    rs_keys = set()
    merged2 = []
    for an in sorted(analyses):
        for r in analyses[an].rs_rows:
            key = (r[0], r[1], r[2])
            rs_keys.add(key)
            h2, se2 = dfa_map.get(key, ("", ""))
            merged2.append([r[0], r[1], r[2], r[3], r[4], h2, se2])
    for an in sorted(analyses):
        for r in analyses[an].dfa_rows:
            if (r[0], r[1], r[2]) not in rs_keys:
                merged2.append([r[0], r[1], r[2], "", "", r[3], r[4]])

    _write_csv(out / "table1.csv", ["symbol", "beta1", "beta2", "f_break", "H_psd"], table1)
    _write_csv(
        out / "table2.csv",
        ["symbol", "domain", "tau", "H_rs", "H_rs_stderr", "H2_dfa", "H2_stderr"],
        merged2,
    )
    _write_csv(
        out / "table3.csv",
        ["symbol", "domain", "H_bda", "gamma", "stderr"],
        table3,
    )
    _write_csv(
        out / "hurst_comparison_parts.csv",
        ["symbol", "period", "method", "domain", "H", "stderr"],
        comparison,
    )
    return EXIT_PARTIAL if any_errors else EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def cmd_report(cfg: RunConfig) -> int:
    parts = cfg.out_dir / "hurst_comparison_parts.csv"
    if not parts.exists():
        print("report: no analyze outputs found; run analyze first", file=sys.stderr)
        return EXIT_CONFIG
    lines = parts.read_text().splitlines()
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    col = {name: i for i, name in enumerate(header)}
    out_rows = [
        [r[col["method"]], r[col["domain"]], r[col["period"]], r[col["symbol"]],
         r[col["H"]], r[col["stderr"]]]
        for r in rows
        if r[col["H"]] != ""
    ]
    out_rows.sort()
    _write_csv(
        cfg.out_dir / "hurst_comparison.csv",
        ["method", "domain", "period", "symbol", "H", "stderr"],
        out_rows,
    )
    print(f"report: {len(out_rows)} rows -> {cfg.out_dir / 'hurst_comparison.csv'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data-dir", dest="data_dir")
    p.add_argument("--out", dest="out")
    p.add_argument("--symbols", dest="symbols")
    p.add_argument("--levels", dest="levels", type=int)
    p.add_argument("--tau-real-seconds", dest="tau_real_seconds")
    p.add_argument("--tau-event-ticks", dest="tau_event_ticks")
    p.add_argument("--thresholds", dest="thresholds")
    p.add_argument("--bins-per-decade", dest="bins_per_decade", type=int)
    p.add_argument("--estimators", dest="estimators")
    p.add_argument("--seed", dest="seed", type=int)
    p.add_argument("--threads", dest="threads", type=int)
    p.add_argument("--config", dest="config")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrm",
        description="Order dis-balance long-range memory pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse LOBSTER day files into cached series")
    _add_common(p_ingest)

    p_synth = sub.add_parser("synth", help="generate a reference process into the cache")
    _add_common(p_synth)
    p_synth.add_argument("--process", choices=["fbm", "brownian", "sde"], required=True)
    p_synth.add_argument("--hurst", type=float, default=0.7)
    p_synth.add_argument("--length", type=int, default=1 << 20)
    p_synth.add_argument("--output-kind", choices=["motion", "increments"], default="motion")
    p_synth.add_argument("--eta", type=float, default=2.5)
    p_synth.add_argument("--lam", type=float, default=3.0)
    p_synth.add_argument("--x-min", type=float, default=1.0)
    p_synth.add_argument("--x-max", type=float, default=1e3)
    p_synth.add_argument("--dt-scale", type=float, default=SdeSpec().dt_scale)
    p_synth.add_argument("--name")

    p_analyze = sub.add_parser("analyze", help="run estimators over cached series")
    _add_common(p_analyze)

    p_report = sub.add_parser("report", help="combine fits into hurst_comparison.csv")
    _add_common(p_report)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "ingest":
            return cmd_ingest(cfg)
        if args.command == "synth":
            return cmd_synth(cfg, args)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "report":
            return cmd_report(cfg)
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_CONFIG
    return EXIT_CONFIG  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
