"""
Simulated annealing on Ising models

Single-spin Metropolis flips under a geometric temperature schedule. The
auxiliary spin, when present, stays at +1.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..cim_solver import BatchStats, TrialResult, run_seeded_batch
from ..errors import InputError
from ..ising_core import IsingModel, energy

logger = logging.getLogger(__name__)

SA = "sa"
DEFAULT_SWEEPS = 2000
DEFAULT_END_RATIO = 1e-3


@dataclass(frozen=True)
class AnnealSchedule:
    """
    Geometric cooling from t_start to t_end over n_sweeps full sweeps.

    t_start == t_end is allowed and gives constant-temperature Metropolis
    (greedy descent once the temperature is tiny).
    """
    t_start: float
    t_end: float
    n_sweeps: int = DEFAULT_SWEEPS
    seed: int = 0

    def __post_init__(self):
        if not (self.t_start > 0 and self.t_end > 0):
            raise InputError(f"Temperatures must be positive, got {self.t_start}, {self.t_end}")
        if self.t_end > self.t_start:
            raise InputError(f"t_end ({self.t_end}) must not exceed t_start ({self.t_start})")
        if int(self.n_sweeps) != self.n_sweeps or self.n_sweeps < 1:
            raise InputError(f"n_sweeps must be a positive integer, got {self.n_sweeps}")

    @property
    def cooling_factor(self) -> float:
        if self.n_sweeps == 1:
            return 1.0
        return (self.t_end / self.t_start) ** (1.0 / (self.n_sweeps - 1))

    def temperatures(self) -> np.ndarray:
        return self.t_start * self.cooling_factor ** np.arange(self.n_sweeps)

    @classmethod
    def for_model(cls, model: IsingModel, n_sweeps: int = DEFAULT_SWEEPS, seed: int = 0,
                  t_start: Optional[float] = None, t_end: Optional[float] = None,
                  end_ratio: float = DEFAULT_END_RATIO) -> "AnnealSchedule":
        """Default schedule: t_start is the largest row sum of |J|, t_end = end_ratio * t_start."""
        if t_start is None:
            span = float(np.abs(model.couplings).sum(axis=1).max()) if model.n_spins else 0.0
            t_start = span if span > 0 else 1.0
        if t_end is None:
            t_end = end_ratio * t_start
        return cls(t_start=t_start, t_end=t_end, n_sweeps=n_sweeps, seed=seed)


def simulated_annealing(model: IsingModel, schedule: AnnealSchedule) -> TrialResult:
    """
    Anneal one seeded trial and return the best configuration seen.

    Args:
        model: Ising model to minimize
        schedule: Temperatures, sweep count and seed

    Returns:
        TrialResult with solver 'sa'
    """
    rng = np.random.default_rng(schedule.seed)
    couplings = np.asarray(model.couplings, dtype=float)
    spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=model.n_spins)
    if model.aux_index is not None:
        spins[model.aux_index] = 1
    free = np.array([i for i in range(model.n_spins) if i != model.aux_index], dtype=int)

    local_field = couplings @ spins
    current = energy(model, spins)
    best, best_energy = spins.copy(), current

    for temperature in schedule.temperatures():
        order = rng.permutation(free)
        draws = rng.random(len(order))
        for i, draw in zip(order, draws):
            delta = 2.0 * spins[i] * local_field[i]
            if delta <= 0.0 or draw < math.exp(-delta / temperature):
                local_field -= 2.0 * spins[i] * couplings[:, i]
                spins[i] = -spins[i]
                current += delta
                if current < best_energy:
                    best, best_energy = spins.copy(), current

    return TrialResult(spins=best, energy=energy(model, best), seed=schedule.seed, solver=SA)


def anneal_batch(model: IsingModel, schedule: AnnealSchedule, n_trials: int, base_seed: int,
                 reference_energy: Optional[float] = None,
                 max_workers: Optional[int] = None) -> BatchStats:
    """Run SA trials over seeds base_seed .. base_seed + n_trials - 1."""
    return run_seeded_batch(lambda seed: simulated_annealing(model, replace(schedule, seed=seed)),
                            n_trials, base_seed, reference_energy, max_workers)
