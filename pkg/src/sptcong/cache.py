"""Precision-aware memo for expensive series.

A request for precision N is served by any stored series with precision
at least N, truncated.  When ``SPTCONG_CACHE_DIR`` is set, series are also
persisted there as JSON in the series wire format.  A rebuild at higher
precision is compared with the shorter entry it replaces, so a damaged
entry is reported instead of silently repaired.
"""

from __future__ import annotations

import os
import re
import threading
from pathlib import Path
from typing import Callable

from .errors import CacheInconsistency
from .series import QSeries

CACHE_ENV = "SPTCONG_CACHE_DIR"

_lock = threading.Lock()
_memory: dict[str, QSeries] = {}


def cache_dir() -> Path | None:
    path = os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def _file_for(key: str, directory: Path) -> Path:
    return directory / (re.sub(r"[^A-Za-z0-9_.-]", "_", key) + ".json")


def get(key: str, q_precision: int, builder: Callable[[int], QSeries],
        persist: bool = True) -> QSeries:
    """Series for ``key`` known to at least ``q_precision`` integral exponents."""
    with _lock:
        hit = _memory.get(key)
    if hit is not None and hit.q_precision >= q_precision:
        return hit.truncate_q(q_precision)
    directory = cache_dir() if persist else None
    previous = hit
    if directory is not None:
        path = _file_for(key, directory)
        if path.exists():
            stored = QSeries.from_json(path.read_text())
            if stored.q_precision >= q_precision:
                with _lock:
                    _memory[key] = stored
                return stored.truncate_q(q_precision)
            if previous is None or stored.q_precision > previous.q_precision:
                previous = stored
    series = builder(q_precision)
    if previous is not None:
        short = series.truncate(previous.precision)
        bad = short.first_difference(previous.truncate(short.precision))
        if bad is not None:
            raise CacheInconsistency(key, bad)
    with _lock:
        current = _memory.get(key)
        if current is None or current.q_precision < series.q_precision:
            _memory[key] = series
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
        path = _file_for(key, directory)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(series.to_json())
        tmp.replace(path)
    return series.truncate_q(q_precision)


def clear_memory() -> None:
    with _lock:
        _memory.clear()
