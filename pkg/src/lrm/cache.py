"""Binary columnar cache for long series.

Layout (little endian): 16-byte header = magic b"LRM1", one domain byte
(0 = real-time seconds, 1 = event ticks), 3 pad bytes, u64 point count;
then the f64 time column followed by the f64 value column.  Stitched
multi-day series are written once and re-read by every estimator run,
avoiding repeated CSV parsing.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .series import Series, TimeDomain

__all__ = ["write_series", "read_series", "CACHE_SUFFIX"]

MAGIC = b"LRM1"
CACHE_SUFFIX = ".lrm"

_DOMAIN_CODE = {TimeDomain.REAL_TIME_SECONDS: 0, TimeDomain.EVENT_TICKS: 1}
_CODE_DOMAIN = {v: k for k, v in _DOMAIN_CODE.items()}

_HEADER = struct.Struct("<4sB3xQ")
assert _HEADER.size == 16


def write_series(series: Series, path: str | Path) -> None:
    """Write a series atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, _DOMAIN_CODE[series.domain], len(series)))
        fh.write(np.asarray(series.times, dtype="<f8").tobytes())
        fh.write(np.asarray(series.values, dtype="<f8").tobytes())
    os.replace(tmp, path)


def read_series(path: str | Path, origin: dict | None = None) -> Series:
    """Read a series written by :func:`write_series`.

    Raises
    ------
    ValueError
        On a bad magic, unknown domain tag, or truncated payload.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, domain_code, count = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        if domain_code not in _CODE_DOMAIN:
            raise ValueError(f"{path}: unknown domain tag {domain_code}")
        payload = fh.read(16 * count)
        if len(payload) != 16 * count:
            raise ValueError(f"{path}: truncated payload, expected {count} points")
    data = np.frombuffer(payload, dtype="<f8")
    return Series(
        _CODE_DOMAIN[domain_code],
        data[:count],
        data[count:],
        origin=origin or {"cache_file": str(path)},
    )
