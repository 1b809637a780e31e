"""Monte Carlo campaign orchestration: drops, scheduling, aggregation."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import channel as ch
from . import geometry as geo
from . import phy
from . import srs

T_SYMBOLS = 14
DOWNTILT_DEG = 12.0
MAX_ATTEMPTS_PER_DROP = 10

CONTAMINATION_FLOOR_DBM = -250.0
PERCENTILES = (5, 50, 95)


class ConfigError(ValueError):
    """Invalid or infeasible simulation configuration."""


class InvalidDrop(RuntimeError):
    """Drop must be resampled (scheduling shortfall or rank deficiency)."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w, floor_dbm: float = CONTAMINATION_FLOOR_DBM):
    w = np.asarray(w, dtype=float)
    out = np.full(w.shape, floor_dbm)
    pos = w > 0
    out[pos] = 10.0 * np.log10(w[pos]) + 30.0
    return float(out) if out.ndim == 0 else out


def thermal_noise_watts(bandwidth_hz: float, noise_figure_db: float) -> float:
    dbm = -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db
    return dbm_to_watts(dbm)


@dataclass
class SimConfig:
    """Campaign configuration; physical defaults follow the evaluated system."""
    scheme: str = "reuse1"
    n_antennas: int = 128
    n_k: int = 32                     # UEs scheduled per BS
    tau: int = 6                      # training symbols per subframe
    protected_ues_per_bs: int = 0     # FR schemes only
    n_drops: int = 100
    seed: int = 1
    n_ue: int | None = None           # dropped population; default 4 * 57 * n_k
    n_sites: int = 19
    isd_m: float = 500.0
    bandwidth_hz: float = 20e6
    carrier_ghz: float = 2.0
    bs_power_dbm: float = 49.0
    ue_power_dbm: float = 23.0
    bs_noise_figure_db: float = 5.0
    ue_noise_figure_db: float = 9.0
    workers: int = 1

    @property
    def n_bs(self) -> int:
        return 3 * self.n_sites

    @property
    def population(self) -> int:
        return self.n_ue if self.n_ue is not None else 4 * self.n_bs * self.n_k

    @property
    def rho_watts(self) -> float:
        return dbm_to_watts(self.ue_power_dbm)

    @property
    def bs_power_watts(self) -> float:
        return dbm_to_watts(self.bs_power_dbm)

    @property
    def ul_noise_watts(self) -> float:
        return thermal_noise_watts(self.bandwidth_hz, self.bs_noise_figure_db)

    @property
    def dl_noise_watts(self) -> float:
        return thermal_noise_watts(self.bandwidth_hz, self.ue_noise_figure_db)

    def validate(self) -> None:
        if self.scheme not in srs.SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; "
                              f"expected one of {', '.join(srs.SCHEMES)}")
        if not 1 <= self.tau <= T_SYMBOLS:
            raise ConfigError(f"tau must be in [1, {T_SYMBOLS}], got {self.tau}")
        if self.n_k < 1:
            raise ConfigError(f"n_k must be positive, got {self.n_k}")
        if self.n_k > self.n_antennas:
            raise ConfigError(f"ZF needs n_k <= n_antennas, got "
                              f"{self.n_k} > {self.n_antennas}")
        if self.n_drops < 1:
            raise ConfigError(f"n_drops must be positive, got {self.n_drops}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if self.population < self.n_bs * self.n_k:
            raise ConfigError(f"population {self.population} cannot supply "
                              f"{self.n_k} UEs to each of {self.n_bs} BSs")
        n_pr = self.protected_count_per_bs()
        if not 0 <= n_pr <= self.n_k:
            raise ConfigError(f"protected_ues_per_bs must be in [0, n_k], "
                              f"got {n_pr}")
        n_p = srs.pool_capacity(self.tau)
        need = 3 * n_pr + (self.n_k - n_pr)
        if need > n_p:
            raise ConfigError(f"budget: N_K={self.n_k} needs >= 3*{n_pr}"
                              f"+{self.n_k - n_pr} = {need} sequences, have {n_p}")

    def protected_count_per_bs(self) -> int:
        if self.scheme == "reuse3":
            return self.n_k
        if self.scheme in ("fr-cc", "fr-na"):
            return self.protected_ues_per_bs
        return 0

    def make_pool(self) -> srs.SrsPool:
        if self.scheme == "reuse1":
            return srs.make_pool(self.tau, beta_pr=0.0)
        if self.scheme == "reuse3":
            return srs.make_pool(self.tau, beta_pr=1.0)
        return srs.pool_for_protected_ues(self.tau, self.protected_ues_per_bs)


@dataclass
class DropMetrics:
    """Per-drop outputs, slot-aligned (slot = one scheduled UE)."""
    ue_of_slot: np.ndarray        # population UE index
    serving_bs: np.ndarray
    protected: np.ndarray
    contamination_w: np.ndarray
    sinr: np.ndarray              # linear
    bs_throughput_bps: np.ndarray  # (n_bs,)
    attempts: int                 # resampled attempts before success


@dataclass
class CampaignResult:
    config: SimConfig
    drops: list[DropMetrics]
    invalid_drops: int

    @property
    def contamination_dbm(self) -> np.ndarray:
        return np.concatenate([watts_to_dbm(d.contamination_w) for d in self.drops])

    @property
    def sinr_db(self) -> np.ndarray:
        return np.concatenate([10.0 * np.log10(d.sinr) for d in self.drops])

    @property
    def throughput_mbps(self) -> np.ndarray:
        return np.concatenate([d.bs_throughput_bps for d in self.drops]) / 1e6

    def percentile_table(self) -> dict:
        return {
            "bs_throughput_mbps": {str(p): percentile(self.throughput_mbps, p / 100)
                                   for p in PERCENTILES},
            "contamination_dbm": {str(p): percentile(self.contamination_dbm, p / 100)
                                  for p in PERCENTILES},
        }


def percentile(samples, q: float) -> float:
    """Linear-interpolation empirical quantile (numpy's 'linear' method)."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("percentile of empty sample set")
    return float(np.quantile(samples, q))


def schedule(association: np.ndarray, n_bs: int, n_k: int,
             rng: np.random.Generator) -> list[np.ndarray]:
    """Uniform random subset of n_k associated UEs per BS, fresh per drop."""
    out = []
    for b in range(n_bs):
        candidates = np.flatnonzero(association == b)
        if len(candidates) < n_k:
            raise InvalidDrop(f"BS {b} has {len(candidates)} associated UEs, "
                              f"needs {n_k}")
        out.append(np.sort(rng.choice(candidates, size=n_k, replace=False)))
    return out


def _large_scale(layout: geo.NetworkLayout, positions: np.ndarray,
                 carrier_ghz: float, rng: np.random.Generator):
    """Per-(BS, UE) large-scale state over the wrap metric.

    Returns gain_db, k_linear, steering_deg arrays of shape (n_bs, n_ue).
    """
    disp = geo.wrap_displacements(layout, positions)        # (n_sites, U, 2)
    d2d_site = np.linalg.norm(disp, axis=-1)
    az_site = np.degrees(np.arctan2(disp[..., 1], disp[..., 0]))

    site_of_bs = np.array([s.site_index for s in layout.sectors])
    az_bs = np.array([s.azimuth_deg for s in layout.sectors])

    d2d = d2d_site[site_of_bs]                              # (n_bs, U)
    h_diff = geo.BS_HEIGHT_M - geo.UE_HEIGHT_M
    d3d = np.hypot(d2d, h_diff)

    steering = geo.wrap_angle_deg(az_site[site_of_bs] - az_bs[:, None])
    vertical = np.degrees(np.arctan2(h_diff, d2d)) - DOWNTILT_DEG
    ant_gain = geo.sector_antenna_gain(steering, vertical)

    los = rng.uniform(size=d2d.shape) < ch.los_probability(d2d)
    pl = ch.pathloss_uma(d3d, carrier_ghz, los)
    sf = ch.sample_shadowing(los, rng)

    gain_db = -pl - sf + ant_gain
    k_lin = np.where(los, 10.0 ** (ch.ricean_k_db(d2d) / 10.0), 0.0)
    return gain_db, k_lin, steering


def _rankings(cfg: SimConfig, gain_db: np.ndarray,
              scheduled: list[np.ndarray], slot_of: dict) -> list[list[int]]:
    """Per-BS protected-first slot orderings for the FR schemes."""
    n_bs = len(scheduled)
    rankings = []
    for b, ues in enumerate(scheduled):
        if cfg.scheme == "fr-cc":
            powers = {slot_of[(b, int(u))]: float(gain_db[b, u]) for u in ues}
            rankings.append(srs.rank_cell_centric(powers))
        else:
            others = np.delete(np.arange(n_bs), b)
            powers = {slot_of[(b, int(u))]: float(gain_db[others, u].max())
                      for u in ues}
            rankings.append(srs.rank_neighbour_aware(powers))
    return rankings


def run_drop(config: SimConfig, drop_index: int, attempt: int = 0,
             layout: geo.NetworkLayout | None = None) -> DropMetrics:
    """One Monte Carlo drop: full training + data pipeline, block fading."""
    if layout is None:
        layout = geo.build_layout(config.isd_m, config.n_sites)
    rng = np.random.default_rng(
        np.random.SeedSequence(config.seed, spawn_key=(drop_index, attempt)))

    drop = geo.drop_ues(layout, config.population, rng)
    gain_db, k_lin, steering = _large_scale(layout, drop.positions,
                                            config.carrier_ghz, rng)
    association = geo.associate_ues(layout, gain_db)
    scheduled = schedule(association, config.n_bs, config.n_k, rng)

    # Slot-aligned views of the scheduled population, BS-major.
    ue_of_slot = np.concatenate(scheduled)
    serving_bs = np.repeat(np.arange(config.n_bs), config.n_k)
    slot_in_bs = np.tile(np.arange(config.n_k), config.n_bs)
    slot_of = {(b, int(u)): s for s, (b, u) in enumerate(zip(serving_bs, ue_of_slot))}
    sched_slots = [list(range(b * config.n_k, (b + 1) * config.n_k))
                   for b in range(config.n_bs)]

    pool = config.make_pool()
    if config.scheme == "reuse1":
        assignment = srs.allocate_reuse1(pool, sched_slots, rng)
    elif config.scheme == "reuse3":
        assignment = srs.allocate_reuse3(pool, sched_slots, rng)
    else:
        rankings = _rankings(config, gain_db, scheduled, slot_of)
        assignment = srs.allocate_fractional(pool, sched_slots, rankings, rng)

    channels = ch.assemble_channels(gain_db[:, ue_of_slot],
                                    k_lin[:, ue_of_slot],
                                    steering[:, ue_of_slot],
                                    config.n_antennas, rng)

    seq_of_slot = np.concatenate(assignment.sequences)
    y = phy.received_pilots(channels, seq_of_slot, pool.n_sequences,
                            config.rho_watts, config.ul_noise_watts, rng)

    precoders = []
    for b in range(config.n_bs):
        est = phy.ls_estimate(y[b], assignment.sequences[b], config.rho_watts)
        precoders.append(phy.zf_precoder(est, config.bs_power_watts))

    gamma = phy.dl_sinr(channels, precoders, serving_bs, slot_in_bs,
                        config.dl_noise_watts)
    collisions = srs.collision_sets(assignment)
    contamination = phy.contamination_power(channels, assignment, collisions,
                                            config.rho_watts)
    throughput = np.array([
        phy.bs_throughput(gamma[serving_bs == b], config.tau, T_SYMBOLS,
                          config.bandwidth_hz)
        for b in range(config.n_bs)])

    protected = np.concatenate(assignment.protected)
    return DropMetrics(ue_of_slot=ue_of_slot, serving_bs=serving_bs,
                       protected=protected, contamination_w=contamination,
                       sinr=gamma, bs_throughput_bps=throughput,
                       attempts=attempt)


def _drop_with_resampling(config: SimConfig, drop_index: int,
                          layout: geo.NetworkLayout | None = None) -> DropMetrics:
    for attempt in range(MAX_ATTEMPTS_PER_DROP):
        try:
            return run_drop(config, drop_index, attempt, layout)
        except (InvalidDrop, phy.RankDeficientError):
            continue
    raise ConfigError(f"drop {drop_index} failed {MAX_ATTEMPTS_PER_DROP} times; "
                      "the configuration cannot reliably schedule n_k UEs per BS")


def _drop_worker(args) -> DropMetrics:
    config, drop_index = args
    return _drop_with_resampling(config, drop_index)


def run_campaign(config: SimConfig) -> CampaignResult:
    """Run n_drops independent drops; deterministic for fixed (config, seed).

    Each drop owns an RNG substream keyed by (seed, drop index, attempt), so
    serial and parallel execution produce identical results.
    """
    config.validate()
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            drops = list(pool.map(_drop_worker,
                                  [(config, i) for i in range(config.n_drops)],
                                  chunksize=1))
    else:
        layout = geo.build_layout(config.isd_m, config.n_sites)
        drops = [_drop_with_resampling(config, i, layout)
                 for i in range(config.n_drops)]
    invalid = sum(d.attempts for d in drops)
    return CampaignResult(config=config, drops=drops, invalid_drops=invalid)
