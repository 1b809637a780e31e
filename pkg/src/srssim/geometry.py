"""Hexagonal multi-site layout with wrap-around, UE dropping and association."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Tri-sector convention: boresights at 30/150/270 degrees.
SECTOR_AZIMUTHS_DEG = (30.0, 150.0, 270.0)
BS_HEIGHT_M = 25.0
UE_HEIGHT_M = 1.5
MIN_BS_UE_DISTANCE_M = 35.0


@dataclass(frozen=True)
class Sector:
    site_index: int
    azimuth_deg: float
    bs_index: int


@dataclass(frozen=True)
class NetworkLayout:
    site_positions: np.ndarray      # (n_sites, 2) metres
    sectors: tuple[Sector, ...]     # 3 per site, site-major order
    isd: float
    wrap_vectors: np.ndarray        # (7, 2), first row is the zero vector

    @property
    def n_sites(self) -> int:
        return len(self.site_positions)

    @property
    def n_bs(self) -> int:
        return len(self.sectors)

    def bs_position(self, bs: int) -> np.ndarray:
        return self.site_positions[self.sectors[bs].site_index]


@dataclass
class UeDrop:
    positions: np.ndarray                  # (n_ue, 2) metres
    heights: float = UE_HEIGHT_M
    association: np.ndarray | None = None  # (n_ue,) BS index, filled later


def _hex_axial_coords(rings: int) -> list[tuple[int, int]]:
    coords = []
    for m in range(-rings, rings + 1):
        for n in range(-rings, rings + 1):
            if max(abs(m), abs(n), abs(m + n)) <= rings:
                coords.append((m, n))
    return coords


def build_layout(isd: float = 500.0, n_sites: int = 19) -> NetworkLayout:
    """Build the 19-site hexagonal cluster with 3 sectors per site.

    Wrap-around uses the six translation vectors that tile the plane with
    copies of the 19-site cluster (shift (3, 2) in lattice coordinates and
    its 60-degree rotations).
    """
    if n_sites != 19:
        raise ValueError(f"only the 19-site cluster is supported, got n_sites={n_sites}")
    if isd <= 0:
        raise ValueError(f"isd must be positive, got {isd}")

    a1 = np.array([isd, 0.0])
    a2 = np.array([isd / 2.0, isd * math.sqrt(3) / 2.0])

    coords = sorted(_hex_axial_coords(2), key=lambda c: (max(abs(c[0]), abs(c[1]), abs(c[0] + c[1])), c))
    site_positions = np.array([m * a1 + n * a2 for m, n in coords])

    # (i, j) = (3, 2) generates a cluster of size i^2 + i*j + j^2 = 19;
    # rotation by 60 degrees maps (i, j) -> (-j, i + j).
    shifts = [(0, 0)]
    i, j = 3, 2
    for _ in range(6):
        shifts.append((i, j))
        i, j = -j, i + j
    wrap_vectors = np.array([m * a1 + n * a2 for m, n in shifts])

    sectors = []
    for s in range(n_sites):
        for az in SECTOR_AZIMUTHS_DEG:
            sectors.append(Sector(site_index=s, azimuth_deg=az, bs_index=len(sectors)))

    return NetworkLayout(site_positions=site_positions, sectors=tuple(sectors),
                         isd=isd, wrap_vectors=wrap_vectors)


def _hexagon_contains(xy: np.ndarray, circumradius: float) -> np.ndarray:
    """Point-in-hexagon test for a pointy-top hexagon centred at the origin."""
    x = np.abs(xy[:, 0])
    y = np.abs(xy[:, 1])
    r_in = circumradius * math.sqrt(3) / 2.0
    return (x <= r_in) & (y <= circumradius - x / math.sqrt(3))


def drop_ues(layout: NetworkLayout, n_ue: int, rng: np.random.Generator) -> UeDrop:
    """Drop UEs uniformly over the cluster footprint (union of site hexagons).

    Positions closer than 35 m (2-D wrap metric) to any site are resampled.
    """
    if n_ue <= 0:
        raise ValueError(f"n_ue must be positive, got {n_ue}")

    circumradius = layout.isd / math.sqrt(3)
    positions = np.empty((0, 2))
    while len(positions) < n_ue:
        need = n_ue - len(positions)
        batch = max(2 * need, 64)
        sites = rng.integers(0, layout.n_sites, size=batch)
        local = rng.uniform(-circumradius, circumradius, size=(batch, 2))
        ok = _hexagon_contains(local, circumradius)
        cand = layout.site_positions[sites] + local
        cand = cand[ok]
        if len(cand):
            d = site_wrap_distances(layout, cand)
            cand = cand[d.min(axis=0) >= MIN_BS_UE_DISTANCE_M]
        positions = np.vstack([positions, cand])
    return UeDrop(positions=positions[:n_ue])


def site_wrap_distances(layout: NetworkLayout, ue_positions: np.ndarray) -> np.ndarray:
    """2-D wrap distances from every site to every UE, shape (n_sites, n_ue)."""
    # images: (n_sites, 7, 2)
    images = layout.site_positions[:, None, :] + layout.wrap_vectors[None, :, :]
    diff = ue_positions[None, None, :, :] - images[:, :, None, :]
    return np.linalg.norm(diff, axis=-1).min(axis=1)


def wrap_displacement(layout: NetworkLayout, bs: int, ue_position: np.ndarray) -> np.ndarray:
    """Displacement from BS to UE using the minimum-distance wrap image."""
    site = layout.bs_position(bs)
    diffs = np.asarray(ue_position)[None, :] - (site[None, :] + layout.wrap_vectors)
    return diffs[np.argmin(np.linalg.norm(diffs, axis=1))]


def wrap_displacements(layout: NetworkLayout, ue_positions: np.ndarray) -> np.ndarray:
    """Minimum-distance displacement from every site to every UE, (n_sites, n_ue, 2)."""
    images = layout.site_positions[:, None, :] + layout.wrap_vectors[None, :, :]
    diff = ue_positions[None, None, :, :] - images[:, :, None, :]   # (S, 7, U, 2)
    dist = np.linalg.norm(diff, axis=-1)
    best = dist.argmin(axis=1)                                      # (S, U)
    s_idx = np.arange(len(layout.site_positions))[:, None]
    u_idx = np.arange(len(ue_positions))[None, :]
    return diff[s_idx, best, u_idx]


def sector_antenna_gain(horizontal_angle_deg, vertical_angle_deg):
    """3GPP parabolic sector element pattern, 65-degree HPBW, 8 dBi peak.

    Angles are measured from the (downtilted) boresight; the caller applies
    the downtilt when computing ``vertical_angle_deg``.
    """
    h = np.asarray(horizontal_angle_deg, dtype=float)
    v = np.asarray(vertical_angle_deg, dtype=float)
    a_h = -np.minimum(12.0 * (h / 65.0) ** 2, 30.0)
    a_v = -np.minimum(12.0 * (v / 65.0) ** 2, 30.0)
    gain = -np.minimum(-(a_h + a_v), 30.0) + 8.0
    if gain.ndim == 0:
        return float(gain)
    return gain


def wrap_angle_deg(angle):
    """Wrap angles to (-180, 180]."""
    a = np.asarray(angle, dtype=float)
    wrapped = -((-a + 180.0) % 360.0 - 180.0)
    if wrapped.ndim == 0:
        return float(wrapped)
    return wrapped


def associate_ues(layout: NetworkLayout, large_scale_gain_db: np.ndarray) -> np.ndarray:
    """Associate each UE to the BS with the strongest large-scale DL gain.

    ``large_scale_gain_db`` has shape (n_bs, n_ue); ties break towards the
    lowest BS index (argmax behaviour).
    """
    if large_scale_gain_db.shape[0] != layout.n_bs:
        raise ValueError("gain matrix must cover all BSs")
    return np.argmax(large_scale_gain_db, axis=0)
