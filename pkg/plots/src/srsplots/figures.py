"""Figure rendering: empirical CDFs and contamination/throughput trade-offs.

Both entry points are pure functions of their input files: they never mutate
inputs and write a single vector image (format chosen by the output suffix,
SVG or PDF recommended).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PLOTTABLE_COLUMNS, SchemaError, read_samples, read_summary, series_label

AXIS_LABELS = {
    "contamination_dbm": "Pilot contamination [dBm]",
    "sinr_db": "DL SINR [dB]",
}


@dataclass
class CdfSeries:
    label: str
    values: np.ndarray     # sorted

    @property
    def median(self) -> float:
        return float(np.median(self.values))


def _ecdf(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.sort(values)
    y = np.arange(1, len(x) + 1) / len(x)
    return x, y


def plot_cdf(inputs: list[str | Path], column: str,
             out: str | Path) -> list[CdfSeries]:
    """Render one empirical CDF per samples.csv; returns the drawn series.

    The returned CdfSeries carry the exact plotted data so callers (and
    tests) can cross-check medians against summary.json without re-parsing
    the image.
    """
    if column not in PLOTTABLE_COLUMNS:
        raise SchemaError(f"column {column!r} is not plottable; "
                          f"expected one of {PLOTTABLE_COLUMNS}")
    if not inputs:
        raise SchemaError("at least one samples.csv is required")

    series = []
    for path in inputs:
        samples = read_samples(path)
        series.append(CdfSeries(series_label(samples),
                                np.sort(samples[column])))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for s in series:
        x, y = _ecdf(s.values)
        ax.step(x, y, where="post", label=s.label)
    ax.set_xlabel(AXIS_LABELS[column])
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return series


def plot_tradeoff(summaries: list[str | Path], out: str | Path,
                  labels: list[str] | None = None) -> list[tuple[float, float]]:
    """Scatter/line of median contamination vs median BS throughput.

    One point per summary.json, annotated with the given label (file stem
    by default). Returns the (contamination_dbm, throughput_mbps) points in
    input order.
    """
    if len(summaries) < 2:
        raise SchemaError("a trade-off figure needs at least 2 summaries")
    if labels is not None and len(labels) != len(summaries):
        raise SchemaError("one label per summary is required")

    points = []
    names = []
    for i, path in enumerate(summaries):
        doc = read_summary(path)
        table = doc["percentiles"]
        points.append((float(table["contamination_dbm"]["50"]),
                       float(table["bs_throughput_mbps"]["50"])))
        names.append(labels[i] if labels else Path(path).parent.name)

    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, ys, marker="o", linestyle="-")
    for name, x, y in zip(names, xs, ys):
        ax.annotate(name, (x, y), textcoords="offset points", xytext=(6, 4))
    ax.set_xlabel("Median pilot contamination [dBm]")
    ax.set_ylabel("Median BS throughput [Mbit/s]")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return points
