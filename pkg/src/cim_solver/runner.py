"""
Seeded trial and batch execution
Trials are independent; batches reduce results in seed order so the output
does not depend on how many workers ran them. CIM batches integrate fixed
blocks of consecutive seeds in lockstep.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from ..config.settings import worker_count
from ..errors import BatchError, DivergenceError, InputError
from ..ising_core import IsingModel, canonical_gauge, energy
from .dynamics import GFSNN, make_dynamics
from .params import BEST, OscillatorState, SolverParams, Trajectory, TrialResult

logger = logging.getLogger(__name__)

SUCCESS_TOL = 1e-9

Outcome = Union[TrialResult, DivergenceError]


def readout(x: np.ndarray) -> np.ndarray:
    """sign(x) with sign(0) = +1."""
    return np.where(x >= 0, 1, -1).astype(np.int8)


def initial_state(n_spins: int, params: SolverParams, seed: int) -> OscillatorState:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-params.init_amplitude, params.init_amplitude, n_spins)
    return OscillatorState(x=x, k=np.zeros(n_spins))


def integrate(state: OscillatorState, model: IsingModel, params: SolverParams,
              variant: str = GFSNN, trajectory_stride: int = 0,
              seed: Optional[int] = None):
    """
    Run params.n_steps Euler steps from a given state.

    Returns:
        (final_state, trajectory or None). The trajectory holds the initial
        state, every trajectory_stride-th state and the final state.
    """
    dynamics = make_dynamics(model, params, variant)
    trajectory = Trajectory([], [], []) if trajectory_stride > 0 else None
    if trajectory is not None:
        trajectory.append(state)

    current = state
    try:
        for n in range(1, params.n_steps + 1):
            current = dynamics.step(current)
            if trajectory is not None and (n % trajectory_stride == 0 or n == params.n_steps):
                trajectory.append(current)
    except DivergenceError as e:
        raise DivergenceError(step=e.step, seed=seed) from e
    return current, trajectory


def _row_energies(model: IsingModel, spins: np.ndarray) -> np.ndarray:
    s = spins.astype(float)
    fields = np.matmul(s[:, None, :], model.couplings)[:, 0, :]
    return model.offset - 0.5 * (fields * s).sum(axis=1)


class _BestSeen:
    """Lowest-energy sign pattern of every row among the sampled states."""

    def __init__(self, model: IsingModel, n_rows: int):
        self.model = model
        self.spins = np.ones((n_rows, model.n_spins), dtype=np.int8)
        self.energies = np.full(n_rows, np.inf)

    def update(self, x: np.ndarray):
        spins = readout(x)
        values = _row_energies(self.model, spins)
        better = values < self.energies
        self.spins[better] = spins[better]
        self.energies[better] = values[better]


def run_block(model: IsingModel, params: SolverParams, seeds: Sequence[int],
              variant: str = GFSNN, trajectory_stride: int = 0) -> List[Outcome]:
    """
    Integrate one trial per seed in lockstep.

    A row that turns non-finite is recorded as diverged at the index of its
    last finite state and parked at the origin for the remaining steps.

    Returns:
        One TrialResult or DivergenceError per seed, in seed order
    """
    seeds = list(seeds)
    dynamics = make_dynamics(model, params, variant)
    x = np.stack([initial_state(model.n_spins, params, seed).x for seed in seeds])
    k = np.zeros_like(x)
    diverged_at = np.full(len(seeds), -1)
    best = _BestSeen(model, len(seeds)) if params.readout == BEST else None
    trajectories = [Trajectory([], [], []) for _ in seeds] if trajectory_stride > 0 else None

    def sample(t: float):
        for row, trajectory in enumerate(trajectories):
            trajectory.append(OscillatorState(x=x[row], k=k[row], t=t))

    t = 0.0
    if trajectories is not None:
        sample(t)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, params.n_steps + 1):
            dx, dk = dynamics.derivatives(x, k, t)
            x = x + params.dt * dx
            k = k + params.dt * dk
            t += params.dt
            finite = np.isfinite(x).all(axis=1) & np.isfinite(k).all(axis=1)
            if not finite.all():
                diverged_at[~finite & (diverged_at < 0)] = n - 1
                x[~finite] = 0.0
                k[~finite] = 0.0
            last = n == params.n_steps
            if best is not None and (n % params.readout_stride == 0 or last):
                best.update(x)
            if trajectories is not None and (n % trajectory_stride == 0 or last):
                sample(t)

    spins = best.spins if best is not None else readout(x)
    outcomes: List[Outcome] = []
    for row, seed in enumerate(seeds):
        if diverged_at[row] >= 0:
            outcomes.append(DivergenceError(step=int(diverged_at[row]), seed=seed))
            continue
        config = spins[row].copy()
        if model.aux_index is not None:
            config = canonical_gauge(config, model.aux_index)
        outcomes.append(TrialResult(spins=config, energy=energy(model, config), seed=seed,
                                    trajectory=trajectories[row] if trajectories else None,
                                    solver=variant))
    return outcomes


def run_trial(model: IsingModel, params: SolverParams, seed: int,
              variant: str = GFSNN, trajectory_stride: int = 0) -> TrialResult:
    """
    Integrate one seeded trial and read out spins.

    Args:
        model: Ising model to minimize
        params: Solver parameters
        seed: Seed of the initial-amplitude generator
        variant: 'gfsnn' or 'snn'
        trajectory_stride: Sample every n-th state (0 disables sampling)

    Returns:
        TrialResult with gauge-canonical spins and their energy

    Raises:
        DivergenceError: the amplitudes became non-finite
    """
    outcome = run_block(model, params, [seed], variant, trajectory_stride)[0]
    if isinstance(outcome, DivergenceError):
        raise outcome
    return outcome


@dataclass
class BatchStats:
    """Seed-ordered results of a batch of independent trials."""
    best: TrialResult
    trials: List[TrialResult]
    diverged_seeds: List[int] = field(default_factory=list)
    reference_energy: Optional[float] = None

    @property
    def seeds(self) -> np.ndarray:
        return np.array([t.seed for t in self.trials], dtype=np.int64)

    @property
    def energies(self) -> np.ndarray:
        return np.array([t.energy for t in self.trials])

    @property
    def n_trials(self) -> int:
        return len(self.trials) + len(self.diverged_seeds)

    @property
    def n_diverged(self) -> int:
        return len(self.diverged_seeds)

    @property
    def n_completed(self) -> int:
        """Trials that finished without diverging; the denominator of every rate."""
        return len(self.trials)

    def success_indicators(self, reference_energy: Optional[float] = None) -> np.ndarray:
        reference = self.reference_energy if reference_energy is None else reference_energy
        if reference is None:
            raise InputError("No reference energy supplied")
        return self.energies <= reference + SUCCESS_TOL

    @property
    def success_rate(self) -> Optional[float]:
        if self.reference_energy is None or not self.trials:
            return None
        return float(np.sum(self.success_indicators())) / self.n_completed


def run_seeded_blocks(block_fn: Callable[[List[int]], List[Outcome]], n_trials: int, base_seed: int,
                      block_size: int = 1, reference_energy: Optional[float] = None,
                      max_workers: Optional[int] = None) -> BatchStats:
    """
    Run block_fn over consecutive seed blocks of base_seed .. base_seed + n_trials - 1.

    Blocks depend only on base_seed and block_size, never on the worker
    count. Diverged trials are logged and excluded; the batch fails only when
    every trial diverges. The best trial has minimal energy, ties going to the
    lowest seed.
    """
    if n_trials < 1:
        raise InputError(f"n_trials must be at least 1, got {n_trials}")
    if block_size < 1:
        raise InputError(f"block_size must be at least 1, got {block_size}")
    seeds = list(range(base_seed, base_seed + n_trials))
    blocks = [seeds[i:i + block_size] for i in range(0, n_trials, block_size)]
    workers = worker_count() if max_workers is None else max_workers

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for block in pool.map(block_fn, blocks) for o in block]
    else:
        outcomes = [o for block in blocks for o in block_fn(block)]

    trials, diverged = [], []
    for seed, outcome in zip(seeds, outcomes):
        if isinstance(outcome, DivergenceError):
            logger.warning(f"Trial diverged: {outcome}")
            diverged.append(seed)
        else:
            trials.append(outcome)
    if not trials:
        raise BatchError(f"All {n_trials} trials diverged (seeds {seeds[0]}..{seeds[-1]})")

    best = trials[0]
    for result in trials[1:]:
        if result.energy < best.energy:
            best = result

    stats = BatchStats(best=best, trials=trials, diverged_seeds=diverged,
                       reference_energy=reference_energy)
    logger.info(f"Batch of {n_trials} trials: best energy {best.energy:.10g} (seed {best.seed}), "
                f"{len(diverged)} diverged"
                + (f", success rate {stats.success_rate:.3f}" if reference_energy is not None else ""))
    return stats


def run_seeded_batch(trial_fn: Callable[[int], TrialResult], n_trials: int, base_seed: int,
                     reference_energy: Optional[float] = None,
                     max_workers: Optional[int] = None) -> BatchStats:
    """Run trial_fn over seeds base_seed .. base_seed + n_trials - 1, one seed per task."""
    def guarded(seeds: List[int]) -> List[Outcome]:
        try:
            return [trial_fn(seeds[0])]
        except DivergenceError as e:
            return [e]

    return run_seeded_blocks(guarded, n_trials, base_seed, 1, reference_energy, max_workers)


def run_batch(model: IsingModel, params: SolverParams, n_trials: int, base_seed: int,
              reference_energy: Optional[float] = None, variant: str = GFSNN,
              max_workers: Optional[int] = None) -> BatchStats:
    """Run n_trials seeded CIM trials on one model, params.block_size of them in lockstep."""
    return run_seeded_blocks(lambda seeds: run_block(model, params, seeds, variant),
                             n_trials, base_seed, params.block_size, reference_energy, max_workers)
