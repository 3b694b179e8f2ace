"""Market data ingestion and the end-to-end volatility forecasting loop.

Daily index levels come in as a date/spx/vix CSV. Each forecast day folds
the last week of index returns through the asymmetric transform into the
lag window, runs the register, predicts the next day's change in the
volatility index, and feeds the squashed residual back. The level forecast
is reconstructed from today's level plus the predicted change.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from typing import TYPE_CHECKING

import numpy as np

from .encoding import asym_transform, delta, log_returns
from .errors import DataError
from .readout import ForecastRecord
from .reservoir import LoopResult, forecast_loop
from .topology import resolve_selector

if TYPE_CHECKING:
    from .config import RunConfig


@dataclass(frozen=True)
class MarketSeries:
    """Aligned daily series of SPX and VIX index levels."""

    dates: tuple[date, ...]
    spx: np.ndarray
    vix: np.ndarray

    def __post_init__(self):
        n = len(self.dates)
        if len(self.spx) != n or len(self.vix) != n:
            raise DataError("dates, spx, and vix must have equal lengths")
        if n == 0:
            raise DataError("market series is empty")
        for name, vals in (("spx", self.spx), ("vix", self.vix)):
            bad = np.flatnonzero(~(np.asarray(vals) > 0.0))
            if bad.size:
                raise DataError(f"non-positive {name} value at row {bad[0]}")
        for i in range(1, n):
            if self.dates[i] <= self.dates[i - 1]:
                raise DataError(f"dates not strictly increasing at row {i}")

    def __len__(self) -> int:
        return len(self.dates)


def load_market_csv(path) -> MarketSeries:
    """Load and validate a daily date,spx,vix CSV.

    Errors name the 1-based file line of the offending row.
    """
    dates: list[date] = []
    spx: list[float] = []
    vix: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file") from None
        if [h.strip().lower() for h in header] != ["date", "spx", "vix"]:
            raise DataError(f"expected header 'date,spx,vix', got {','.join(header)!r}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3 or any(not c.strip() for c in row):
                raise DataError("row must have non-empty date,spx,vix fields", line=line_no)
            try:
                d = date.fromisoformat(row[0].strip())
            except ValueError:
                raise DataError(f"bad ISO date {row[0]!r}", line=line_no) from None
            try:
                s, v = float(row[1]), float(row[2])
            except ValueError:
                raise DataError(f"bad numeric value in {row[1:]!r}", line=line_no) from None
            if not (math.isfinite(s) and math.isfinite(v)):
                raise DataError("non-finite value", line=line_no)
            if s <= 0 or v <= 0:
                raise DataError(f"non-positive index level ({s}, {v})", line=line_no)
            if dates and d <= dates[-1]:
                raise DataError(
                    f"date {d.isoformat()} not after previous row", line=line_no
                )
            dates.append(d)
            spx.append(s)
            vix.append(v)
    if not dates:
        raise DataError("no data rows")
    return MarketSeries(tuple(dates), np.asarray(spx), np.asarray(vix))


@dataclass(frozen=True)
class DiagnosticsReport:
    """Stylized facts of a market series."""

    n_rows: int
    first_date: str
    last_date: str
    corr_pct_changes: float | None  # corr of daily % changes, None if degenerate
    mean_vix: float
    max_vix: float
    max_vix_date: str
    all_positive: bool

    def as_dict(self) -> dict:
        return {
            "n_rows": self.n_rows,
            "first_date": self.first_date,
            "last_date": self.last_date,
            "corr_pct_changes": self.corr_pct_changes,
            "mean_vix": self.mean_vix,
            "max_vix": self.max_vix,
            "max_vix_date": self.max_vix_date,
            "all_positive": self.all_positive,
        }


def diagnostics(series: MarketSeries) -> DiagnosticsReport:
    """Summary statistics: % change correlation, VIX mean/max, positivity."""
    spx = np.asarray(series.spx, dtype=float)
    vix = np.asarray(series.vix, dtype=float)
    corr: float | None = None
    if len(series) >= 3:
        dspx = 100.0 * (spx[1:] / spx[:-1] - 1.0)
        dvix = 100.0 * (vix[1:] / vix[:-1] - 1.0)
        if np.var(dspx) > 0 and np.var(dvix) > 0:
            corr = float(np.corrcoef(dspx, dvix)[0, 1])
    imax = int(np.argmax(vix))
    return DiagnosticsReport(
        n_rows=len(series),
        first_date=series.dates[0].isoformat(),
        last_date=series.dates[-1].isoformat(),
        corr_pct_changes=corr,
        mean_vix=float(vix.mean()),
        max_vix=float(vix[imax]),
        max_vix_date=series.dates[imax].isoformat(),
        all_positive=bool(np.all(spx > 0) and np.all(vix > 0)),
    )


@dataclass
class ForecastOutcome:
    """Full result of a market forecasting run."""

    loop: LoopResult
    series: MarketSeries
    metrics: dict

    @property
    def records(self) -> list[ForecastRecord]:
        return self.loop.records

    def rows(self):
        """Per-day output rows: date, levels, changes, residual.

        The date is the day being forecast (t+1); actual/predicted vix are
        that day's level and its reconstruction from the previous level plus
        the predicted change.
        """
        vix = self.series.vix
        for rec in self.loop.records:
            t = rec.t
            yield {
                "date": self.series.dates[t + 1].isoformat(),
                "actual_vix": float(vix[t + 1]),
                "predicted_vix": float(vix[t] + rec.predicted),
                "actual_dvix": rec.actual,
                "predicted_dvix": rec.predicted,
                "residual": rec.residual,
            }


def run_forecast(series: MarketSeries, cfg: "RunConfig") -> ForecastOutcome:
    """Day-by-day one-step-ahead VIX-change forecasting over a market series.

    Summary metrics (MSE, residual moments, correlation of predicted and
    actual changes) cover only the post-burn-in records, although the
    reservoir and readout update through the whole run.
    """
    n_days = len(series)
    first_step = 7  # first day with a full return-difference lag window
    burn_in_records = int((n_days - 1 - first_step) * cfg.burn_in_fraction)
    if n_days - 1 <= first_step + 1 or n_days - 1 - first_step - burn_in_records < 2:
        raise ValueError(f"series too short for forecasting ({n_days} rows)")

    r = log_returns(series.spx)  # r[i] belongs to day i+1
    dr = delta(r)  # dr[i] belongs to day i+2
    u = asym_transform(dr, cfg.transform)

    # day-indexed arrays over t = 0..n_days-2 (each step t forecasts day t+1)
    x = np.zeros(n_days - 1)
    x[2:] = u
    y = np.diff(series.vix)  # y[t] = vix[t+1] - vix[t]

    topo = resolve_selector(cfg.topology, cfg.n_qubits)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(3,)))
    loop = forecast_loop(x, y, topo, cfg, rng, start=first_step)

    evaluated = loop.evaluated
    res = np.array([rec.residual for rec in evaluated])
    pred = np.array([rec.predicted for rec in evaluated])
    act = np.array([rec.actual for rec in evaluated])
    corr: float | None = None
    if np.var(pred) > 0 and np.var(act) > 0:
        corr = float(np.corrcoef(pred, act)[0, 1])
    metrics = {
        "n_records": len(loop.records),
        "n_evaluated": len(evaluated),
        "burn_in_records": loop.burn_in,
        "mse": float(np.mean(res**2)),
        "residual_mean": float(res.mean()),
        "residual_std": float(res.std()),
        "corr_predicted_actual_dvix": corr,
        "feedback_scale": loop.feedback_scale,
    }
    return ForecastOutcome(loop=loop, series=series, metrics=metrics)


def synthetic_market_series(
    n_days: int = 1200, seed: int = 0, start: date = date(2005, 1, 3)
) -> MarketSeries:
    """Volatility-clustered synthetic SPX/VIX data for tests and demos.

    SPX returns follow a leverage-asymmetric GARCH(1,1); VIX is the
    annualized conditional volatility in percent plus a small observation
    wiggle. Negative returns move volatility more than positive ones, so the
    series reproduces the negative change-on-change correlation of the real
    indices.
    """
    if n_days < 20:
        raise ValueError(f"n_days must be >= 20, got {n_days}")
    rng = np.random.default_rng(seed)
    a, b = 0.09, 0.88
    h_star = (0.01) ** 2  # ~1% daily vol
    omega = h_star * (1.0 - a - b)
    leverage = 1.6

    h = h_star
    prices = [2000.0]
    vix = []
    rets = []
    for _ in range(n_days):
        z = rng.standard_normal()
        r = math.sqrt(h) * z
        rets.append(r)
        prices.append(prices[-1] * math.exp(r))
        shock = a * r * r * (leverage if r < 0 else 1.0)
        h = omega + shock + b * h
        level = 100.0 * math.sqrt(252.0 * h)
        vix.append(level * (1.0 + 0.03 * rng.standard_normal()))
    dates = []
    d = start
    while len(dates) < n_days:
        if d.weekday() < 5:
            dates.append(d)
        d = d.fromordinal(d.toordinal() + 1)
    return MarketSeries(
        tuple(dates), np.asarray(prices[1:]), np.maximum(np.asarray(vix), 1e-3)
    )
