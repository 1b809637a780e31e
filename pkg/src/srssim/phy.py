"""Pilot reception, LS estimation, ZF precoding, DL SINR and throughput.

Scheduled UEs are referred to by global slot index: ``channels`` arrays have
shape (n_bs, n_slots, n_antennas) and hold the true channel from every slot's
UE to every BS, large-scale gain included.
"""
from __future__ import annotations

import numpy as np

from .srs import CollisionSets, SrsAssignment

CONDITION_LIMIT = 1e12


class RankDeficientError(RuntimeError):
    """Estimated channel matrix is numerically rank deficient."""


def received_pilots(channels: np.ndarray, sequence_of_slot: np.ndarray,
                    n_sequences: int, rho: float, noise_var: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Received pilot matrices Y, shape (n_bs, n_antennas, n_sequences).

    Column p of Y_b accumulates sqrt(rho) times the channel of every UE
    transmitting sequence p, plus AWGN of per-entry variance ``noise_var``.
    """
    n_bs, n_slots, n_ant = channels.shape
    if sequence_of_slot.shape != (n_slots,):
        raise ValueError("sequence index array does not match channel slots")
    y = np.zeros((n_bs, n_sequences, n_ant), dtype=complex)
    np.add.at(y, (np.arange(n_bs)[:, None], sequence_of_slot[None, :]),
              np.sqrt(rho) * channels)
    if noise_var > 0.0:
        y += np.sqrt(noise_var / 2.0) * (
            rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape))
    return y.transpose(0, 2, 1)


def ls_estimate(observation: np.ndarray, own_sequences: np.ndarray,
                rho: float) -> np.ndarray:
    """LS channel estimate for one BS: the de-spread pilot columns.

    ``observation`` is Y_b (n_antennas, n_sequences); column k of the result
    is column ``own_sequences[k]`` of Y_b divided by sqrt(rho).
    """
    return observation[:, own_sequences] / np.sqrt(rho)


def contamination_power(channels: np.ndarray, assignment: SrsAssignment,
                        collisions: CollisionSets, rho: float) -> np.ndarray:
    """Per-antenna average other-cell pilot interference per scheduled slot.

    For a UE on sequence p at BS b this is rho times the mean squared
    channel magnitude, summed over all other-cell users of p as seen at b.
    Returns watts, shape (n_slots,); zero where no collision occurs.
    """
    n_ant = channels.shape[-1]
    norms2 = np.sum(np.abs(channels) ** 2, axis=-1)  # (n_bs, n_slots)
    out = np.zeros(channels.shape[1])
    for b, slot, seq, _ in assignment.items():
        colliders = collisions.colliders(b, seq)
        if colliders:
            out[slot] = rho * sum(norms2[b, s] for _, s in colliders) / n_ant
    return out


def zf_precoder(estimate: np.ndarray, p_bs: float) -> np.ndarray:
    """ZF precoder W = H_hat (H_hat^H H_hat)^-1, columns scaled to p_bs/N_K.

    Raises RankDeficientError when the Gram matrix is ill conditioned; the
    caller resamples the drop instead of regularizing.
    """
    n_ant, n_k = estimate.shape
    if n_k > n_ant:
        raise ValueError(f"need n_antennas >= n_ue, got {n_ant} < {n_k}")
    gram = estimate.conj().T @ estimate
    if np.linalg.cond(gram) > CONDITION_LIMIT:
        raise RankDeficientError("channel estimate Gram matrix is ill conditioned")
    w = estimate @ np.linalg.inv(gram)
    scale = np.sqrt(p_bs / n_k) / np.linalg.norm(w, axis=0)
    return w * scale


def dl_sinr(channels: np.ndarray, precoders: list[np.ndarray],
            serving_bs: np.ndarray, slot_in_bs: np.ndarray,
            noise_var_ue: float) -> np.ndarray:
    """Linear DL SINR per scheduled slot.

    Desired power is |h_{k,b}^H w_{k,b}|^2; interference sums the powers of
    every other stream in the network (the desired stream is excluded).
    """
    n_slots = channels.shape[1]
    total = np.zeros(n_slots)
    desired = np.zeros(n_slots)
    slots = np.arange(n_slots)
    for j, w in enumerate(precoders):
        powers = np.abs(channels[j].conj() @ w) ** 2  # (n_slots, n_k_j)
        total += powers.sum(axis=1)
        served_here = serving_bs == j
        desired[served_here] = powers[slots[served_here], slot_in_bs[served_here]]
    return desired / (total - desired + noise_var_ue)


def bs_throughput(sinrs: np.ndarray, tau: int, t_total: int,
                  bandwidth: float) -> float:
    """Sum DL throughput of one BS in bit/s, including the training overhead."""
    if not 0 <= tau <= t_total:
        raise ValueError(f"tau must be in [0, {t_total}], got {tau}")
    return (1.0 - tau / t_total) * float(
        np.sum(bandwidth * np.log2(1.0 + np.asarray(sinrs, dtype=float))))
