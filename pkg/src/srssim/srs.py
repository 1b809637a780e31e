"""SRS sequence pool, allocation schemes and collision bookkeeping.

Sequences are tracked as indices into an orthogonal pool of size 16 * tau;
any unitary sequence family with per-cell orthogonality gives identical LS
estimates, so no explicit sequence vectors are generated. Sector identity
within a site is ``bs_index % 3`` (site-major sector ordering).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SEQUENCES_PER_SYMBOL = 16
SYMBOLS_PER_SUBFRAME = 14

SCHEMES = ("reuse1", "reuse3", "fr-cc", "fr-na")


class BudgetError(ValueError):
    """Raised when a scheduled-UE set does not fit the sequence budget."""


def pool_capacity(tau: int) -> int:
    """Number of orthogonal sequences available with ``tau`` training symbols."""
    if not 1 <= tau <= SYMBOLS_PER_SUBFRAME:
        raise ValueError(f"tau must be in [1, {SYMBOLS_PER_SUBFRAME}], got {tau}")
    return SEQUENCES_PER_SYMBOL * tau


def max_scheduled(n_sequences: int, beta_pr: float) -> int:
    """Largest per-BS scheduled-UE count given the protected UE fraction.

    ``beta_pr`` is the fraction of scheduled UEs whose sequences are
    protected (each costs 3 sequences site-wide); the rest share.
    """
    if not 0.0 <= beta_pr <= 1.0:
        raise ValueError(f"beta_pr must be in [0, 1], got {beta_pr}")
    return int(n_sequences / (3.0 * beta_pr + (1.0 - beta_pr)))


@dataclass(frozen=True)
class SrsPool:
    tau: int
    n_sequences: int
    beta_pr: float          # fraction of the pool that is protected
    protected_count: int    # multiple of 3; lowest indices of the pool
    shared_count: int

    @property
    def protected_per_sector(self) -> int:
        return self.protected_count // 3


def make_pool(tau: int, beta_pr: float = 0.0) -> SrsPool:
    """Build a pool; the protected share is rounded down to a multiple of 3."""
    n_seq = pool_capacity(tau)
    if not 0.0 <= beta_pr <= 1.0:
        raise ValueError(f"beta_pr must be in [0, 1], got {beta_pr}")
    protected = (int(beta_pr * n_seq + 1e-9) // 3) * 3
    return SrsPool(tau=tau, n_sequences=n_seq, beta_pr=beta_pr,
                   protected_count=protected, shared_count=n_seq - protected)


def pool_for_protected_ues(tau: int, protected_ues_per_bs: int) -> SrsPool:
    """Pool whose protected block holds exactly 3 * protected_ues_per_bs indices."""
    n_seq = pool_capacity(tau)
    need = 3 * protected_ues_per_bs
    if need > n_seq:
        raise BudgetError(f"budget: {protected_ues_per_bs} protected UEs need "
                          f"{need} sequences, have {n_seq}")
    return make_pool(tau, beta_pr=need / n_seq)


@dataclass
class SrsAssignment:
    """Per-BS sequence indices aligned with the scheduled UE lists."""
    pool: SrsPool
    scheduled: list[list[int]]            # per-BS UE ids
    sequences: list[np.ndarray]           # per-BS int arrays
    protected: list[np.ndarray]           # per-BS bool arrays

    @property
    def n_bs(self) -> int:
        return len(self.scheduled)

    def items(self):
        """Yield (bs, ue, sequence, protected) for every assignment."""
        for b, ues in enumerate(self.scheduled):
            for k, ue in enumerate(ues):
                yield b, ue, int(self.sequences[b][k]), bool(self.protected[b][k])


@dataclass
class CollisionSets:
    """For each (bs, sequence) in use, the other-cell users of that sequence."""
    sets: dict[tuple[int, int], list[tuple[int, int]]] = field(default_factory=dict)

    def colliders(self, bs: int, seq: int) -> list[tuple[int, int]]:
        return self.sets.get((bs, seq), [])


def _check_budget(n_k: int, available: int, context: str) -> None:
    if n_k > available:
        raise BudgetError(f"budget: N_K={n_k} exceeds the {available} "
                          f"sequences available under {context}")


def allocate_reuse1(pool: SrsPool, scheduled: Sequence[Sequence[int]],
                    rng: np.random.Generator) -> SrsAssignment:
    """Every BS draws from the full pool, independently (uncoordinated reuse)."""
    sequences, flags = [], []
    for ues in scheduled:
        _check_budget(len(ues), pool.n_sequences, "Reuse 1")
        sequences.append(rng.choice(pool.n_sequences, size=len(ues), replace=False))
        flags.append(np.zeros(len(ues), dtype=bool))
    return SrsAssignment(pool=pool, scheduled=[list(u) for u in scheduled],
                         sequences=sequences, protected=flags)


def allocate_reuse3(pool: SrsPool, scheduled: Sequence[Sequence[int]],
                    rng: np.random.Generator) -> SrsAssignment:
    """Each of the 3 co-located sectors draws from its own third of the pool."""
    part = pool.n_sequences // 3
    sequences, flags = [], []
    for b, ues in enumerate(scheduled):
        _check_budget(len(ues), part, "Reuse 3")
        sector = b % 3
        sequences.append(sector * part
                         + rng.choice(part, size=len(ues), replace=False))
        flags.append(np.ones(len(ues), dtype=bool))
    return SrsAssignment(pool=pool, scheduled=[list(u) for u in scheduled],
                         sequences=sequences, protected=flags)


def rank_cell_centric(received_powers: dict[int, float]) -> list[int]:
    """UEs by increasing serving-BS power; the head of the list is protected.

    Weakest-at-serving-BS (cell-edge) UEs come first. Ties break by UE id.
    """
    return sorted(received_powers, key=lambda u: (received_powers[u], u))


def rank_neighbour_aware(neighbour_powers: dict[int, float]) -> list[int]:
    """UEs by decreasing max-neighbour power; the head of the list is protected.

    UEs coupling most strongly to other BSs cause the most contamination
    there, so they get the protected resources. Ties break by UE id.
    """
    return sorted(neighbour_powers, key=lambda u: (-neighbour_powers[u], u))


def allocate_fractional(pool: SrsPool, scheduled: Sequence[Sequence[int]],
                        rankings: Sequence[Sequence[int]],
                        rng: np.random.Generator) -> SrsAssignment:
    """Protect the head of each BS ranking Reuse-3-style; the rest share.

    The protected block is the lowest ``protected_count`` indices, split in
    three per-sector partitions; the shared block is drawn from uniformly
    and independently across all BSs network-wide.
    """
    n_pr = pool.protected_per_sector
    shared_base = pool.protected_count
    sequences, flags = [], []
    for b, ues in enumerate(scheduled):
        n_k = len(ues)
        n_prot = min(n_pr, n_k)
        if len(rankings[b]) < n_k:
            raise ValueError(f"ranking for BS {b} covers {len(rankings[b])} "
                             f"of {n_k} scheduled UEs")
        _check_budget(n_k - n_prot, pool.shared_count, "the shared block")
        protected_ues = set(rankings[b][:n_prot])

        sector = b % 3
        prot_draw = sector * n_pr + rng.choice(n_pr, size=n_prot, replace=False) \
            if n_prot else np.empty(0, dtype=int)
        shared_draw = shared_base + rng.choice(pool.shared_count,
                                               size=n_k - n_prot, replace=False) \
            if n_k - n_prot else np.empty(0, dtype=int)

        seq = np.empty(n_k, dtype=int)
        flag = np.zeros(n_k, dtype=bool)
        ip = isd = 0
        for k, ue in enumerate(ues):
            if ue in protected_ues:
                seq[k] = prot_draw[ip]
                flag[k] = True
                ip += 1
            else:
                seq[k] = shared_draw[isd]
                isd += 1
        sequences.append(seq)
        flags.append(flag)
    return SrsAssignment(pool=pool, scheduled=[list(u) for u in scheduled],
                         sequences=sequences, protected=flags)


def collision_sets(assignment: SrsAssignment) -> CollisionSets:
    """List, for every (bs, sequence) in use, the other-cell co-users."""
    users: dict[int, list[tuple[int, int]]] = {}
    for b, ue, seq, _ in assignment.items():
        users.setdefault(seq, []).append((b, ue))

    out = CollisionSets()
    for b, ue, seq, _ in assignment.items():
        out.sets[(b, seq)] = [(j, k) for (j, k) in users[seq] if j != b]
    return out
