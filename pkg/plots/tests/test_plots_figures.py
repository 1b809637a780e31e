"""Figure rendering behaviour on synthetic inputs."""
import json

import numpy as np
import pytest

from srsplots import SchemaError, plot_cdf, plot_tradeoff
from test_plots_io import HEADER, summary_doc, write_samples


def test_cdf_constant_series_steps_at_value(tmp_path):
    f = tmp_path / "samples.csv"
    write_samples(f, [-88.0] * 10)
    out = tmp_path / "cdf.svg"
    series = plot_cdf([f], "contamination_dbm", out)
    assert out.exists() and out.stat().st_size > 0
    assert len(series) == 1
    np.testing.assert_allclose(series[0].values, -88.0)
    assert series[0].median == -88.0


def test_cdf_multiple_series_labels(tmp_path):
    paths = []
    for i, scheme in enumerate(("reuse1", "reuse3")):
        f = tmp_path / f"{scheme}.csv"
        write_samples(f, [-80.0 - 5 * i, -70.0 - 5 * i], scheme=scheme)
        paths.append(f)
    series = plot_cdf(paths, "contamination_dbm", tmp_path / "cdf.pdf")
    assert [s.label for s in series] == ["reuse1", "reuse3"]
    assert (tmp_path / "cdf.pdf").exists()


def test_cdf_empty_csv_writes_nothing(tmp_path):
    good = tmp_path / "good.csv"
    write_samples(good, [-80.0])
    empty = tmp_path / "empty.csv"
    empty.write_text(HEADER + "\n")
    out = tmp_path / "cdf.svg"
    with pytest.raises(SchemaError):
        plot_cdf([good, empty], "contamination_dbm", out)
    assert not out.exists()


def test_cdf_rejects_unknown_column(tmp_path):
    f = tmp_path / "samples.csv"
    write_samples(f, [-80.0])
    with pytest.raises(SchemaError, match="not plottable"):
        plot_cdf([f], "bs", tmp_path / "cdf.svg")


def _write_summary(path, cont, tput):
    doc = summary_doc()
    doc["percentiles"]["contamination_dbm"]["50"] = cont
    doc["percentiles"]["bs_throughput_mbps"]["50"] = tput
    path.write_text(json.dumps(doc))


def test_tradeoff_points_in_input_order(tmp_path):
    paths = []
    expect = []
    for i in range(4):
        d = tmp_path / f"tau={i + 1}"
        d.mkdir()
        f = d / "summary.json"
        _write_summary(f, -80.0 - 3 * i, 900.0 + 40 * i)
        paths.append(f)
        expect.append((-80.0 - 3 * i, 900.0 + 40 * i))
    out = tmp_path / "tradeoff.svg"
    points = plot_tradeoff(paths, out)
    assert points == expect
    assert out.exists() and out.stat().st_size > 0


def test_tradeoff_needs_two_summaries(tmp_path):
    f = tmp_path / "summary.json"
    _write_summary(f, -80.0, 900.0)
    with pytest.raises(SchemaError, match="at least 2"):
        plot_tradeoff([f], tmp_path / "tradeoff.svg")


def test_tradeoff_label_count_mismatch(tmp_path):
    paths = []
    for i in range(2):
        f = tmp_path / f"s{i}.json"
        _write_summary(f, -80.0, 900.0)
        paths.append(f)
    with pytest.raises(SchemaError, match="one label per summary"):
        plot_tradeoff(paths, tmp_path / "t.svg", labels=["only-one"])
