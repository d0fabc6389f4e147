"""Daily price files, log-returns, full-series and rolling-window fits."""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .estimator import EstimationConfig, EstimationError, FitResult, normalize_and_fit

__all__ = [
    "PriceFormatError",
    "ParseReport",
    "PriceSeries",
    "ReturnSeries",
    "RollingResult",
    "LocalMinimum",
    "PRICE_COLUMNS",
    "parse_prices",
    "log_returns",
    "fit_series",
    "rolling_fit",
    "find_local_min",
]

PRICE_COLUMNS = ("Date", "Open", "High", "Low", "Close", "Adj Close", "Volume")
_COLUMN_CHOICES = {"close": "Close", "adjclose": "Adj Close"}
_MISSING = {"", "null", "nan", "na", "n/a"}


class PriceFormatError(ValueError):
    """The price file cannot be used at all."""


@dataclass
class ParseReport:
    rows_read: int = 0
    skipped_missing: int = 0
    errors: list = field(default_factory=list)  # (line number, message)


@dataclass(frozen=True)
class PriceSeries:
    dates: tuple
    prices: np.ndarray
    symbol: str = ""
    report: ParseReport | None = field(default=None, compare=False)

    def __post_init__(self):
        prices = np.asarray(self.prices, dtype=float)
        if len(self.dates) != prices.size:
            raise ValueError("dates and prices differ in length")
        if np.any(~(prices > 0)):
            raise ValueError("prices must be positive")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", prices)

    def __len__(self):
        return self.prices.size


@dataclass(frozen=True)
class ReturnSeries:
    dates: tuple
    returns: np.ndarray
    prices: np.ndarray | None = None  # close on each return's date
    symbol: str = ""

    def __len__(self):
        return np.asarray(self.returns).size


def parse_prices(text, column: str = "close", symbol: str = "") -> PriceSeries:
    """Read a ``Date,Open,High,Low,Close,Adj Close,Volume`` file.

    ``text`` may be a string or a text stream.  Rows with a missing price are
    skipped and counted; rows with a bad date, a non-positive price or an
    out-of-order date are recorded in ``report.errors`` and dropped.  Only an
    unusable header or the absence of any valid row is fatal.
    """
    if column not in _COLUMN_CHOICES:
        raise ValueError(f"column must be one of {sorted(_COLUMN_CHOICES)}, got {column!r}")
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise PriceFormatError("no data rows (file is empty)")
    header = [h.strip().lstrip("﻿") for h in header]
    wanted = _COLUMN_CHOICES[column]
    missing = [name for name in ("Date", wanted) if name not in header]
    if missing:
        raise PriceFormatError(f"malformed header {header!r}: missing {missing}")
    i_date, i_price = header.index("Date"), header.index(wanted)

    report = ParseReport()
    dates, prices = [], []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        report.rows_read += 1
        if len(row) <= max(i_date, i_price):
            report.errors.append((line_no, "too few fields"))
            continue
        raw_price = row[i_price].strip()
        if raw_price.lower() in _MISSING:
            report.skipped_missing += 1
            continue
        try:
            date = dt.date.fromisoformat(row[i_date].strip())
        except ValueError:
            report.errors.append((line_no, f"unparsable date {row[i_date]!r}"))
            continue
        try:
            price = float(raw_price)
        except ValueError:
            report.errors.append((line_no, f"unparsable price {raw_price!r}"))
            continue
        if not (math.isfinite(price) and price > 0):
            report.errors.append((line_no, f"non-positive price {raw_price!r}"))
            continue
        if dates and date <= dates[-1]:
            report.errors.append((line_no, f"date {date} not after {dates[-1]}"))
            continue
        dates.append(date)
        prices.append(price)
    if not dates:
        detail = f"; first error at line {report.errors[0][0]}: {report.errors[0][1]}" if report.errors else ""
        raise PriceFormatError(f"no data rows{detail}")
    return PriceSeries(tuple(dates), np.array(prices), symbol, report)


def log_returns(p: PriceSeries) -> ReturnSeries:
    if len(p) < 2:
        raise ValueError(f"need at least 2 prices for a return, got {len(p)}")
    prices = p.prices
    returns = np.log(prices[1:] / prices[:-1])
    return ReturnSeries(p.dates[1:], returns, prices[1:].copy(), p.symbol)


def fit_series(r: ReturnSeries, config: EstimationConfig | None = None) -> FitResult:
    if len(r) < 100:
        raise ValueError(f"need at least 100 returns, got {len(r)}")
    return normalize_and_fit(np.asarray(r.returns, dtype=float), config)


@dataclass(frozen=True)
class RollingResult:
    """Per-day estimates; ``alphas[j]`` belongs to return index ``indices[j]``.

    Days whose window failed to fit hold NaN and carry the failure flags.
    """

    indices: np.ndarray
    dates: tuple
    alphas: np.ndarray
    betas: np.ndarray
    gammas: np.ndarray
    deltas: np.ndarray
    flags: tuple
    window: int
    prices: np.ndarray | None = None

    def __len__(self):
        return self.indices.size


def _fit_window(values: np.ndarray, config: EstimationConfig):
    try:
        res = normalize_and_fit(values, config, warn_small_sample=False)
    except EstimationError as exc:
        return (math.nan,) * 4, exc.flags
    return res.params.as_tuple(), res.flags


def rolling_fit(r, window: int = 1000, config: EstimationConfig | None = None,
                n_jobs: int | None = 1) -> RollingResult:
    """Fit each day ``t >= window`` on returns ``t-window .. t-1``.

    ``r`` is a :class:`ReturnSeries` or a plain array.  Windows are
    independent; with ``n_jobs > 1`` they run on a thread pool and are
    reassembled in day order, so the output does not depend on ``n_jobs``.
    """
    config = config or EstimationConfig()
    returns = np.asarray(r.returns if isinstance(r, ReturnSeries) else r, dtype=float)
    if window < 100:
        raise ValueError(f"window must be >= 100, got {window}")
    if returns.size < window + 1:
        raise ValueError(f"series of {returns.size} returns is too short for window {window} (need {window + 1})")
    days = np.arange(window, returns.size)
    windows = (returns[t - window:t] for t in days)
    if n_jobs is None or n_jobs == 1:
        fits = [_fit_window(w, config) for w in windows]
    else:
        workers = None if n_jobs < 0 else n_jobs
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fits = list(pool.map(lambda w: _fit_window(w, config), windows))
    params = np.array([f[0] for f in fits], dtype=float).reshape(-1, 4)
    if isinstance(r, ReturnSeries):
        dates = tuple(r.dates[t] for t in days) if r.dates else ()
        prices = None if r.prices is None else np.asarray(r.prices)[days]
    else:
        dates, prices = (), None
    return RollingResult(
        indices=days,
        dates=dates,
        alphas=params[:, 0],
        betas=params[:, 1],
        gammas=params[:, 2],
        deltas=params[:, 3],
        flags=tuple(f[1] for f in fits),
        window=window,
        prices=prices,
    )


class LocalMinimum(NamedTuple):
    value: float
    date: object
    index: int


def find_local_min(res: RollingResult, track="alpha", date_range: Sequence | None = None) -> LocalMinimum:
    """Minimum of a track inside ``date_range`` (inclusive), earliest on ties.

    ``track`` is ``"alpha"``, ``"beta"``, ``"price"`` or an array aligned with
    ``res``.  ``date_range`` is a ``(start, end)`` pair of dates, or of return
    indices when the result carries no dates.
    """
    if isinstance(track, str):
        if track == "price":
            if res.prices is None:
                raise ValueError("rolling result carries no prices")
            values = np.asarray(res.prices, dtype=float)
        elif track in ("alpha", "beta"):
            values = res.alphas if track == "alpha" else res.betas
        else:
            raise ValueError(f"unknown track {track!r}")
    else:
        values = np.asarray(track, dtype=float)
        if values.size != len(res):
            raise ValueError("track length does not match the rolling result")
    mask = np.isfinite(values)
    if date_range is not None:
        start, end = date_range
        if isinstance(start, (dt.date, str)):
            start, end = (dt.date.fromisoformat(d) if isinstance(d, str) else d for d in (start, end))
            if not res.dates:
                raise ValueError("rolling result carries no dates; pass an index range")
            keys = np.array([d.toordinal() for d in res.dates])
            mask &= (keys >= start.toordinal()) & (keys <= end.toordinal())
        else:
            mask &= (res.indices >= start) & (res.indices <= end)
    if not mask.any():
        raise ValueError(f"no valid {track if isinstance(track, str) else 'track'} values in range {date_range}")
    candidates = np.flatnonzero(mask)
    j = candidates[np.argmin(values[candidates])]
    date = res.dates[j] if res.dates else None
    return LocalMinimum(float(values[j]), date, int(res.indices[j]))
