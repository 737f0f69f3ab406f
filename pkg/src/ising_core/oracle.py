"""
Exhaustive ground-state search for small Ising models
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import SizeError
from .model import IsingModel, SpinConfig, energies

logger = logging.getLogger(__name__)

DEFAULT_MAX_SPINS = 24
CHUNK_BITS = 16


def brute_force_ground_state(model: IsingModel,
                             max_spins: int = DEFAULT_MAX_SPINS) -> Tuple[SpinConfig, float]:
    """
    Enumerate every configuration and return one of minimal energy.

    One spin is pinned to +1: the auxiliary spin when the model has one,
    otherwise spin 0 (global-flip symmetry halves the search). Free spins are
    enumerated with the first free spin as the most significant bit and +1
    sorting before -1, so among exact ties the lexicographically smallest
    configuration wins.

    Args:
        model: Model to solve
        max_spins: Refuse models larger than this

    Returns:
        (spins, energy) of a ground state
    """
    n = model.n_spins
    if n > max_spins:
        raise SizeError(f"Brute force limited to {max_spins} spins, model has {n}")

    pinned = model.aux_index if model.aux_index is not None else 0
    free = np.array([i for i in range(n) if i != pinned], dtype=int)
    n_free = free.shape[0]
    shifts = np.arange(n_free - 1, -1, -1, dtype=np.int64)

    best_energy = np.inf
    best_spins = np.ones(n, dtype=np.int8)
    total = 1 << n_free
    chunk = 1 << min(CHUNK_BITS, n_free)

    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = np.ones((codes.shape[0], n), dtype=np.int8)
        if n_free:
            bits = (codes[:, None] >> shifts[None, :]) & 1
            rows[:, free] = (1 - 2 * bits).astype(np.int8)
        values = energies(model, rows)
        idx = int(np.argmin(values))
        if values[idx] < best_energy:
            best_energy = float(values[idx])
            best_spins = rows[idx].copy()

    logger.debug(f"Brute force over {total} configurations: ground energy {best_energy:.12g}")
    return best_spins, best_energy
