"""CSV and JSON serialisation of run outputs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

CURVE_COLUMNS = ("threshold_kw", "bel", "pl", "cdf")
UNAVAILABILITY_COLUMNS = ("scenario", "plausibility", "belief", "probability")


def _cell(value):
    # repr keeps full float precision so re-runs can be compared byte for byte
    return "" if value is None else repr(float(value))


def write_results(curves, reports, directory, manifest: dict | None = None) -> dict:
    """Write ``curves.csv``, ``unavailability.csv`` and ``run.json``; returns the paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "curves": out / "curves.csv",
        "unavailability": out / "unavailability.csv",
        "manifest": out / "run.json",
    }

    n = len(curves.thresholds)

    def column(values):
        return [None] * n if values is None else list(values)

    with open(paths["curves"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for row in zip(curves.thresholds, column(curves.bel), column(curves.pl), column(curves.cdf)):
            writer.writerow([_cell(v) for v in row])

    with open(paths["unavailability"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(UNAVAILABILITY_COLUMNS)
        for r in reports:
            writer.writerow([r.penetration_label, _cell(r.pl), _cell(r.bel), _cell(r.prob)])

    with open(paths["manifest"], "w", encoding="utf-8") as fh:
        json.dump(manifest or {}, fh, indent=2)
        fh.write("\n")
    return paths


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
