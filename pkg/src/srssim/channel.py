"""3GPP UMa large-scale propagation and Ricean small-scale channel vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BS_HEIGHT_M, UE_HEIGHT_M

SPEED_OF_LIGHT = 299_792_458.0
SHADOWING_STD_LOS_DB = 4.0
SHADOWING_STD_NLOS_DB = 6.0
# 3GPP UMa NLOS street/building geometry defaults.
STREET_WIDTH_M = 20.0
BUILDING_HEIGHT_M = 20.0


@dataclass
class LinkState:
    """Large-scale state of one BS-UE link (wrap metric)."""
    distance: float          # 3-D metres
    los: bool
    pathloss: float          # dB
    shadowing: float         # dB
    antenna_gain: float      # dB
    k_factor: float          # linear; 0 for NLOS
    steering_angle: float    # degrees from BS boresight

    @property
    def gain_db(self) -> float:
        return -self.pathloss - self.shadowing + self.antenna_gain


def los_probability(d):
    """UMa LOS probability as a function of 2-D distance in metres."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    p = np.minimum(18.0 / d, 1.0) * (1.0 - np.exp(-d / 63.0)) + np.exp(-d / 63.0)
    return float(p) if p.ndim == 0 else p


def breakpoint_distance(fc_ghz: float) -> float:
    """LOS breakpoint with 1 m effective environment height."""
    h_bs = BS_HEIGHT_M - 1.0
    h_ut = UE_HEIGHT_M - 1.0
    return 4.0 * h_bs * h_ut * fc_ghz * 1e9 / SPEED_OF_LIGHT


def _pathloss_los(d, fc_ghz):
    d_bp = breakpoint_distance(fc_ghz)
    pl1 = 22.0 * np.log10(d) + 28.0 + 20.0 * np.log10(fc_ghz)
    pl2 = (40.0 * np.log10(d) + 28.0 + 20.0 * np.log10(fc_ghz)
           - 9.0 * np.log10(d_bp ** 2 + (BS_HEIGHT_M - UE_HEIGHT_M) ** 2))
    return np.where(d < d_bp, pl1, pl2)


def _pathloss_nlos(d, fc_ghz):
    w = STREET_WIDTH_M
    h = BUILDING_HEIGHT_M
    return (161.04 - 7.1 * np.log10(w) + 7.5 * np.log10(h)
            - (24.37 - 3.7 * (h / BS_HEIGHT_M) ** 2) * np.log10(BS_HEIGHT_M)
            + (43.42 - 3.1 * np.log10(BS_HEIGHT_M)) * (np.log10(d) - 3.0)
            + 20.0 * np.log10(fc_ghz)
            - (3.2 * np.log10(11.75 * UE_HEIGHT_M) ** 2 - 4.97))


def pathloss_uma(d, fc_ghz, los):
    """3GPP UMa pathloss in dB; NLOS is lower-bounded by the LOS value.

    ``d`` is the link distance in metres (valid range 10..5000).
    """
    d = np.asarray(d, dtype=float)
    if np.any(d < 10.0) or np.any(d > 5000.0):
        raise ValueError("distance out of UMa validity range [10, 5000] m")
    pl_los = _pathloss_los(d, fc_ghz)
    los = np.asarray(los, dtype=bool)
    pl = np.where(los, pl_los, np.maximum(_pathloss_nlos(d, fc_ghz), pl_los))
    return float(pl) if pl.ndim == 0 else pl


def sample_shadowing(los, rng: np.random.Generator):
    """Zero-mean log-normal shadowing in dB (sigma 4 dB LOS, 6 dB NLOS)."""
    los = np.asarray(los, dtype=bool)
    sigma = np.where(los, SHADOWING_STD_LOS_DB, SHADOWING_STD_NLOS_DB)
    draw = rng.standard_normal(size=los.shape) * sigma
    return float(draw) if draw.ndim == 0 else draw


def ricean_k_db(d):
    """Distance-dependent K factor in dB for LOS links: 13 - 0.03 d."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    k = 13.0 - 0.03 * d
    return float(k) if k.ndim == 0 else k


def steering_vector(theta_deg, n_antennas: int) -> np.ndarray:
    """Half-wavelength ULA steering vector(s) for azimuth(s) in degrees.

    Returns shape (..., n_antennas); entries are unit modulus.
    """
    theta = np.radians(np.asarray(theta_deg, dtype=float))
    n = np.arange(n_antennas)
    return np.exp(1j * np.pi * np.sin(theta)[..., None] * n)


def small_scale(gain_db, k_linear, steering_angle_deg, n_antennas: int,
                rng: np.random.Generator) -> np.ndarray:
    """Ricean channel vectors with the large-scale gain folded in.

    h = g * ( sqrt(K/(K+1)) e^{j psi} a(theta) + sqrt(1/(K+1)) w ),
    g = sqrt(10^(gain_db/10)). Broadcasts over leading link dimensions;
    returns shape (..., n_antennas).
    """
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    gain_db = np.asarray(gain_db, dtype=float)
    k = np.asarray(k_linear, dtype=float)
    theta = np.asarray(steering_angle_deg, dtype=float)
    shape = np.broadcast_shapes(gain_db.shape, k.shape, theta.shape)
    g = np.sqrt(10.0 ** (np.broadcast_to(gain_db, shape) / 10.0))
    k = np.broadcast_to(k, shape)
    theta = np.broadcast_to(theta, shape)

    psi = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    # Interleaved real/imag draws viewed as unit-variance complex Gaussians.
    out = rng.standard_normal(shape + (n_antennas, 2)).view(np.complex128)[..., 0]
    out *= (g * np.sqrt(0.5 / (k + 1.0)))[..., None]

    # LOS ray: accumulate g*sqrt(K/(K+1)) e^{j psi} times the steering phase
    # ramp antenna by antenna, avoiding a second full-size complex matrix.
    acc = g * np.sqrt(k / (k + 1.0)) * np.exp(1j * psi)
    step = np.exp(1j * np.pi * np.sin(np.radians(theta)))
    for i in range(n_antennas):
        out[..., i] += acc
        if i + 1 < n_antennas:
            acc = acc * step
    return out


def assemble_channels(gain_db: np.ndarray, k_linear: np.ndarray,
                      steering_deg: np.ndarray, n_antennas: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Channel vectors for every (BS, scheduled UE) pair.

    Inputs have shape (n_bs, n_sched); the result is (n_bs, n_sched,
    n_antennas). Channel reciprocity: the same realization serves the UL
    training and the DL data phase of a drop.
    """
    return small_scale(gain_db, k_linear, steering_deg, n_antennas, rng)
