"""Hourly load series: ingestion from text files and the RTS-shaped reference year."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import IngestionError

HOURS_PER_YEAR = 8760
RTS_PEAK_KW = 4500.0
BUNDLED_RTS_FILE = "rts_hourly_4500kw.csv"


def data_path(name: str) -> Path:
    return Path(str(resources.files("dgadequacy") / "data" / name))


def ingest_hourly_load(path) -> np.ndarray:
    """Read newline-delimited kW values, one per hour.

    Blank lines and ``#`` comments are skipped. Any positive number of rows is
    accepted; a full year has 8760.
    """
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError:
                raise IngestionError(f"{path}: row {lineno}: not a number: {text!r}") from None
            if not np.isfinite(value):
                raise IngestionError(f"{path}: row {lineno}: non-finite value")
            values.append(value)
    if not values:
        raise IngestionError(f"{path}: no load values found")
    return np.asarray(values)


def rts_hourly_load(peak_kw: float = RTS_PEAK_KW, hours: int = HOURS_PER_YEAR) -> np.ndarray:
    """RTS-79 shaped hourly load scaled to ``peak_kw``.

    The tables describe 52 weeks (8736 h); longer requests wrap around to the
    first week, so the standard 8760 h year repeats week 1's Monday.
    """
    with open(data_path("rts79_load_percentages.json"), encoding="utf-8") as fh:
        table = json.load(fh)
    weekly = np.asarray(table["weekly_peak_pct"]) / 100.0
    daily = np.asarray(table["daily_peak_pct"]) / 100.0
    season_weeks = {}
    for season, ranges in table["season_of_week"].items():
        for first, last in ranges:
            for week in range(first, last + 1):
                season_weeks[week] = season

    year = []
    for week_idx, week_factor in enumerate(weekly, start=1):
        profile = table["hourly_pct"][season_weeks[week_idx]]
        for day, day_factor in enumerate(daily):
            hourly = profile["weekday" if day < 5 else "weekend"]
            year.append(week_factor * day_factor * np.asarray(hourly) / 100.0)
    year = np.concatenate(year)
    reps = -(-hours // year.size)
    return peak_kw * np.tile(year, reps)[:hours]


def write_hourly_load(series, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# hourly load, kW\n")
        for value in series:
            fh.write(f"{value:.4f}\n")


def bundled_rts_load() -> np.ndarray:
    return ingest_hourly_load(data_path(BUNDLED_RTS_FILE))
