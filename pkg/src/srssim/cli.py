"""Config-driven entry point: single campaigns, sweeps, CSV/JSON persistence."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np
import tomli

from . import srs
from .engine import (CampaignResult, ConfigError, SimConfig, percentile,
                     run_campaign, watts_to_dbm)

CSV_HEADER = ("drop,bs,ue,scheme,tau,n_k,protected_flag,"
              "contamination_dbm,sinr_db,bs_throughput_mbps")

SWEEP_AXES = {"tau": "tau", "scheme": "scheme",
              "protected_ues": "protected_ues_per_bs", "n_k": "n_k"}

_FIELD_NAMES = {f.name for f in dataclasses.fields(SimConfig)}
_ALIASES = {"drops": "n_drops"}


@dataclasses.dataclass
class SweepSpec:
    base: SimConfig
    axis: str       # tau | scheme | protected_ues | n_k
    values: list

    def points(self) -> list[tuple[str, SimConfig]]:
        field = SWEEP_AXES[self.axis]
        out = []
        for v in self.values:
            cfg = dataclasses.replace(self.base, **{field: v})
            out.append((f"{self.axis}={v}", cfg))
        return out


def _load_document(path: Path) -> dict:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix == ".json":
        def reject_duplicates(pairs):
            seen = {}
            for k, v in pairs:
                if k in seen:
                    raise ConfigError(f"duplicate key {k!r} in {path}")
                seen[k] = v
            return seen
        try:
            return json.loads(path.read_text(), object_pairs_hook=reject_duplicates)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
    try:
        return tomli.loads(path.read_text())
    except tomli.TOMLDecodeError as e:
        # tomli reports duplicate keys and syntax errors with line/column
        raise ConfigError(f"{path}: {e}") from e


def parse_config(path: str | Path) -> SimConfig | SweepSpec:
    """Parse a TOML (or resolved JSON) config; unknown keys are rejected.

    Omitted physical parameters take the standard defaults. Sequence-budget
    infeasibility is reported here, before any campaign starts.
    """
    doc = _load_document(Path(path))
    axis = doc.pop("sweep_axis", None)
    values = doc.pop("sweep_values", None)
    if (axis is None) != (values is None):
        raise ConfigError("sweep_axis and sweep_values must be given together")

    fields = {}
    for key, value in doc.items():
        name = _ALIASES.get(key, key)
        if name not in _FIELD_NAMES:
            raise ConfigError(f"unknown config key {key!r}")
        fields[name] = value
    try:
        base = SimConfig(**fields)
    except TypeError as e:
        raise ConfigError(str(e)) from e

    if axis is None:
        base.validate()
        return base

    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; "
                          f"expected one of {', '.join(SWEEP_AXES)}")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep_values must be a non-empty list")
    spec = SweepSpec(base=base, axis=axis, values=list(values))
    for label, cfg in spec.points():   # fail-closed before any run
        try:
            cfg.validate()
        except ConfigError as e:
            raise ConfigError(f"sweep point {label}: {e}") from e
    return spec


def resolved_config_dict(config: SimConfig) -> dict:
    d = dataclasses.asdict(config)
    d["n_ue"] = config.population   # pin the derived default
    return d


def write_samples_csv(result: CampaignResult, path: Path) -> None:
    cfg = result.config
    lines = [CSV_HEADER]
    for i, drop in enumerate(result.drops):
        cont_dbm = watts_to_dbm(drop.contamination_w)
        sinr_db = 10.0 * np.log10(drop.sinr)
        tput_mbps = drop.bs_throughput_bps / 1e6
        for s in range(len(drop.ue_of_slot)):
            b = int(drop.serving_bs[s])
            lines.append(f"{i},{b},{int(drop.ue_of_slot[s])},{cfg.scheme},"
                         f"{cfg.tau},{cfg.n_k},{int(drop.protected[s])},"
                         f"{cont_dbm[s]:.6f},{sinr_db[s]:.6f},"
                         f"{tput_mbps[b]:.6f}")
    path.write_text("\n".join(lines) + "\n")


def write_summary_json(result: CampaignResult, wall_clock_s: float,
                       path: Path) -> None:
    summary = {
        "percentiles": result.percentile_table(),
        "invalid_drops": result.invalid_drops,
        "n_drops": len(result.drops),
        "n_throughput_samples": int(result.throughput_mbps.size),
        "n_contamination_samples": int(result.contamination_dbm.size),
        "wall_clock_s": wall_clock_s,
    }
    path.write_text(json.dumps(summary, indent=2) + "\n")


def run_single(config: SimConfig, out_dir: Path, quiet: bool = False) -> CampaignResult:
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.monotonic()
    result = run_campaign(config)
    elapsed = time.monotonic() - start
    write_samples_csv(result, out_dir / "samples.csv")
    write_summary_json(result, elapsed, out_dir / "summary.json")
    (out_dir / "resolved_config.json").write_text(
        json.dumps(resolved_config_dict(config), indent=2) + "\n")
    if not quiet:
        med_t = percentile(result.throughput_mbps, 0.5)
        med_c = percentile(result.contamination_dbm, 0.5)
        print(f"{out_dir}: median throughput {med_t:.1f} Mbit/s, "
              f"median contamination {med_c:.1f} dBm "
              f"({result.invalid_drops} resampled drops, {elapsed:.1f} s)")
    return result


def run(config_or_sweep: SimConfig | SweepSpec, out_dir: str | Path,
        quiet: bool = False) -> int:
    """Execute a campaign or sweep; returns a process exit status."""
    out_dir = Path(out_dir)
    try:
        if isinstance(config_or_sweep, SimConfig):
            run_single(config_or_sweep, out_dir, quiet)
            return 0
        rows = []
        for label, cfg in config_or_sweep.points():
            result = run_single(cfg, out_dir / label, quiet)
            rows.append((label,
                         percentile(result.contamination_dbm, 0.5),
                         percentile(result.throughput_mbps, 0.5)))
        lines = ["point,contamination_dbm_p50,bs_throughput_mbps_p50"]
        lines += [f"{label},{c:.6f},{t:.6f}" for label, c, t in rows]
        (out_dir / "tradeoff.csv").write_text("\n".join(lines) + "\n")
        return 0
    except ConfigError:
        raise
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="srssim",
        description="Monte Carlo simulator for uplink SRS allocation schemes "
                    "in a massive-MIMO cellular network.")
    parser.add_argument("--config", required=True, help="TOML config file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--drops", type=int, help="override the drop count")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        parsed = parse_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.drops is not None:
            overrides["n_drops"] = args.drops
        if overrides:
            if isinstance(parsed, SimConfig):
                parsed = dataclasses.replace(parsed, **overrides)
                parsed.validate()
            else:
                parsed.base = dataclasses.replace(parsed.base, **overrides)
                for label, cfg in parsed.points():
                    cfg.validate()
    except (ConfigError, srs.BudgetError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1

    try:
        return run(parsed, args.out, quiet=args.quiet)
    except (ConfigError, srs.BudgetError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except Exception as e:   # noqa: BLE001 - CLI boundary
        print(f"runtime error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
