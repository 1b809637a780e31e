"""Readers for the simulator's campaign artifacts (samples.csv, summary.json).

These are the only coupling points to the simulator: the CSV column schema
and the summary percentile table. Both are validated up front so that a
mismatched or truncated file fails before any figure is drawn.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SAMPLES_COLUMNS = ("drop", "bs", "ue", "scheme", "tau", "n_k",
                   "protected_flag", "contamination_dbm", "sinr_db",
                   "bs_throughput_mbps")

PLOTTABLE_COLUMNS = ("contamination_dbm", "sinr_db")

SUMMARY_METRICS = ("contamination_dbm", "bs_throughput_mbps")


class SchemaError(ValueError):
    """Input file does not match the campaign artifact schema."""


def read_samples(path: str | Path) -> dict[str, np.ndarray]:
    """Load a samples.csv into column arrays keyed by header name.

    Numeric columns come back as float arrays, identifier columns as int
    arrays, and the scheme column as strings. Raises SchemaError on a
    missing file, a wrong header, or a file with no data rows.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"samples file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(SAMPLES_COLUMNS):
            raise SchemaError(f"{path}: unexpected header {header}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no sample rows")
    cols = list(zip(*rows))
    out: dict[str, np.ndarray] = {}
    for name, values in zip(SAMPLES_COLUMNS, cols):
        if name == "scheme":
            out[name] = np.asarray(values)
        elif name in ("drop", "bs", "ue", "tau", "n_k", "protected_flag"):
            out[name] = np.asarray(values, dtype=int)
        else:
            try:
                out[name] = np.asarray(values, dtype=float)
            except ValueError as e:
                raise SchemaError(f"{path}: non-numeric {name}: {e}") from e
    return out


def series_label(samples: dict[str, np.ndarray]) -> str:
    """Legend label derived from the scheme column (mixed files flagged)."""
    schemes = sorted(set(samples["scheme"]))
    return "/".join(schemes)


def read_summary(path: str | Path) -> dict:
    """Load a summary.json and check the percentile table shape."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"summary file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: {e}") from e
    table = doc.get("percentiles")
    if not isinstance(table, dict):
        raise SchemaError(f"{path}: missing percentiles table")
    for metric in SUMMARY_METRICS:
        if metric not in table or "50" not in table[metric]:
            raise SchemaError(f"{path}: percentiles lack {metric} p50")
    return doc
