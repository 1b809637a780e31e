import json

import numpy as np
import pytest

from srssim import cli
from srssim.engine import ConfigError, SimConfig, percentile

TINY = """\
scheme = "reuse1"
seed = 3
drops = 2
tau = 1
n_k = 4
n_antennas = 8
"""


def write(tmp_path, text, name="config.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestParseConfig:
    def test_minimal_file_gets_defaults(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, 'scheme = "reuse3"\nseed = 9\n'))
        assert isinstance(cfg, SimConfig)
        assert cfg.scheme == "reuse3"
        assert cfg.seed == 9
        assert cfg.isd_m == 500.0
        assert cfg.bandwidth_hz == 20e6
        assert cfg.carrier_ghz == 2.0
        assert cfg.bs_power_dbm == 49.0
        assert cfg.ue_power_dbm == 23.0
        assert cfg.n_antennas == 128

    def test_infeasible_budget_rejected_before_running(self, tmp_path):
        path = write(tmp_path, 'scheme = "reuse3"\ntau = 2\nn_k = 32\n')
        with pytest.raises(ConfigError, match="budget"):
            cli.parse_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown config key"):
            cli.parse_config(write(tmp_path, 'scheme = "reuse1"\nbogus = 1\n'))

    def test_duplicate_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.parse_config(write(tmp_path, 'seed = 1\nseed = 2\n'))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            cli.parse_config(tmp_path / "nope.toml")

    def test_sweep_points_prevalidated(self, tmp_path):
        path = write(tmp_path, TINY + 'sweep_axis = "n_k"\nsweep_values = [2, 400]\n')
        with pytest.raises(ConfigError, match="sweep point n_k=400"):
            cli.parse_config(path)

    def test_sweep_parsing(self, tmp_path):
        path = write(tmp_path, TINY + 'sweep_axis = "tau"\nsweep_values = [1, 2, 3]\n')
        spec = cli.parse_config(path)
        assert isinstance(spec, cli.SweepSpec)
        assert [c.tau for _, c in spec.points()] == [1, 2, 3]

    def test_resolved_json_round_trip(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, TINY))
        resolved = tmp_path / "resolved_config.json"
        resolved.write_text(json.dumps(cli.resolved_config_dict(cfg)))
        again = cli.parse_config(resolved)
        assert again == cli.parse_config(write(tmp_path, TINY)).__class__(
            **{**cfg.__dict__, "n_ue": cfg.population})


class TestRunOutputs:
    def test_fixed_seed_byte_identical_csv(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, TINY))
        assert cli.run(cfg, tmp_path / "a", quiet=True) == 0
        assert cli.run(cfg, tmp_path / "b", quiet=True) == 0
        assert ((tmp_path / "a" / "samples.csv").read_bytes()
                == (tmp_path / "b" / "samples.csv").read_bytes())

    def test_summary_matches_csv_percentiles(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, TINY))
        cli.run(cfg, tmp_path / "out", quiet=True)
        rows = (tmp_path / "out" / "samples.csv").read_text().strip().split("\n")
        header = rows[0].split(",")
        cont = np.array([float(r.split(",")[header.index("contamination_dbm")])
                         for r in rows[1:]])
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["percentiles"]["contamination_dbm"]["50"] == pytest.approx(
            percentile(cont, 0.5))
        # throughput percentiles use one sample per (drop, bs)
        seen = {}
        for r in rows[1:]:
            f = r.split(",")
            seen[(f[0], f[1])] = float(f[header.index("bs_throughput_mbps")])
        assert summary["percentiles"]["bs_throughput_mbps"]["50"] == pytest.approx(
            percentile(list(seen.values()), 0.5))

    def test_resolved_config_reproduces_csv(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, TINY))
        cli.run(cfg, tmp_path / "a", quiet=True)
        again = cli.parse_config(tmp_path / "a" / "resolved_config.json")
        cli.run(again, tmp_path / "b", quiet=True)
        assert ((tmp_path / "a" / "samples.csv").read_bytes()
                == (tmp_path / "b" / "samples.csv").read_bytes())

    def test_csv_schema(self, tmp_path):
        cfg = cli.parse_config(write(tmp_path, TINY))
        cli.run(cfg, tmp_path / "out", quiet=True)
        lines = (tmp_path / "out" / "samples.csv").read_text().split("\n")
        assert lines[0] == ("drop,bs,ue,scheme,tau,n_k,protected_flag,"
                            "contamination_dbm,sinr_db,bs_throughput_mbps")
        assert len(lines) == 1 + 2 * 57 * 4 + 1  # header + rows + trailing newline

    def test_tau_sweep_tradeoff_table(self, tmp_path):
        spec = cli.parse_config(write(
            tmp_path, TINY + 'sweep_axis = "tau"\nsweep_values = [1, 2, 3, 4, 5, 6]\n'))
        assert cli.run(spec, tmp_path / "sweep", quiet=True) == 0
        table = (tmp_path / "sweep" / "tradeoff.csv").read_text().strip().split("\n")
        assert table[0] == "point,contamination_dbm_p50,bs_throughput_mbps_p50"
        assert len(table) == 7
        for tau in range(1, 7):
            assert (tmp_path / "sweep" / f"tau={tau}" / "samples.csv").exists()

    def test_scheme_sweep_four_rows(self, tmp_path):
        text = TINY.replace('scheme = "reuse1"\n', "").replace("tau = 1\n", "") + (
            'protected_ues_per_bs = 2\ntau = 2\n'
            'sweep_axis = "scheme"\n'
            'sweep_values = ["reuse1", "reuse3", "fr-cc", "fr-na"]\n')
        spec = cli.parse_config(write(tmp_path, text))
        assert cli.run(spec, tmp_path / "schemes", quiet=True) == 0
        table = (tmp_path / "schemes" / "tradeoff.csv").read_text().strip().split("\n")
        assert len(table) == 5


class TestMain:
    def test_success_exit_code(self, tmp_path, capsys):
        path = write(tmp_path, TINY)
        assert cli.main(["--config", str(path), "--out", str(tmp_path / "o"),
                         "--quiet"]) == 0

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = write(tmp_path, 'scheme = "reuse3"\ntau = 2\nn_k = 32\n')
        assert cli.main(["--config", str(path), "--out", str(tmp_path / "o")]) == 1
        assert "config error" in capsys.readouterr().err

    def test_missing_config_exit_code(self, tmp_path, capsys):
        assert cli.main(["--config", str(tmp_path / "nope.toml"),
                         "--out", str(tmp_path / "o")]) == 1

    def test_seed_and_drops_overrides(self, tmp_path):
        path = write(tmp_path, TINY)
        cli.main(["--config", str(path), "--out", str(tmp_path / "a"),
                  "--seed", "99", "--drops", "1", "--quiet"])
        resolved = json.loads((tmp_path / "a" / "resolved_config.json").read_text())
        assert resolved["seed"] == 99
        assert resolved["n_drops"] == 1
