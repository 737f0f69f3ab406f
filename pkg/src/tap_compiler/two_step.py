"""
Batch solving of compiled instances and the two-step refit procedure

Step 1 fits one quadratic shared by all links over the global reachable flow
range and solves. Step 2 refits every link around the flows step 1 predicts,
recompiles and solves again with the same seeds.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from ..cim_solver import GFSNN, SNN, BatchStats, SolverParams, run_batch
from ..errors import InputError, TapSolveError
from ..ising_core import IsingModel
from ..tap_baselines import SA, AnnealSchedule, anneal_batch
from ..traffic import Route, TrafficNetwork
from .compiler import CompiledTap, DecodedSolution, choose_lambda, compile_tap, decode
from .discretization import DiscretizationPlan, reachable_extra_flow
from .fitting import DEFAULT_SAMPLES, QuadraticFit, apply_fit, fit_quadratic, fit_shared

logger = logging.getLogger(__name__)

SOLVERS = (GFSNN, SNN, SA)
DEFAULT_MIN_WIDTH_GROUPS = 2.0

TapSolver = Callable[[IsingModel, int, int], BatchStats]


def make_solver(name: str, params: Optional[SolverParams] = None,
                anneal: Optional[Dict] = None, max_workers: Optional[int] = None) -> TapSolver:
    """
    Batch solver by name: 'gfsnn', 'snn' (same parameters, no feedback) or 'sa'.

    Args:
        name: Solver name
        params: Oscillator parameters for the CIM variants
        anneal: Optional t_start, t_end, t_end_ratio, n_sweeps for SA
        max_workers: Worker threads per batch
    """
    if name in (GFSNN, SNN):
        params = params or SolverParams()
        if name == SNN:
            params = params.without_feedback()
        return lambda model, n_trials, base_seed: run_batch(
            model, params, n_trials, base_seed, variant=name, max_workers=max_workers)
    if name == SA:
        settings = anneal or {}

        def solve(model: IsingModel, n_trials: int, base_seed: int) -> BatchStats:
            schedule = AnnealSchedule.for_model(
                model, n_sweeps=settings.get("n_sweeps", 2000), seed=base_seed,
                t_start=settings.get("t_start"), t_end=settings.get("t_end"),
                end_ratio=settings.get("t_end_ratio", 1e-3))
            return anneal_batch(model, schedule, n_trials, base_seed, max_workers=max_workers)
        return solve
    raise InputError(f"Unknown solver '{name}', expected one of {list(SOLVERS)}")


@dataclass
class StepOutcome:
    """Best feasible decode of one solved compiled model."""
    compiled: CompiledTap
    best: DecodedSolution
    feasibility_rate: float
    n_trials: int
    n_feasible: int
    bound_violations: int = 0
    n_diverged: int = 0


@dataclass
class TwoStepResult:
    step1: StepOutcome
    step2: StepOutcome


def solve_compiled(compiled: CompiledTap, solver: TapSolver, n_trials: int,
                   base_seed: int = 0) -> StepOutcome:
    """
    Solve, decode every trial and keep the feasible one with the lowest true objective.

    Raises:
        TapSolveError: no trial decodes to a feasible assignment
    """
    batch = solver(compiled.model, n_trials, base_seed)
    best: Optional[DecodedSolution] = None
    n_feasible = 0
    violations = 0
    for trial in batch.trials:
        decoded = decode(compiled, trial.spins)
        if not decoded.feasible:
            continue
        decoded.seed = trial.seed
        n_feasible += 1
        if not decoded.within_bound:
            violations += 1
        if best is None or decoded.true_objective < best.true_objective:
            best = decoded

    # Diverged trials do not count; run_seeded_batch raises when none completes.
    rate = n_feasible / batch.n_completed
    if best is None:
        raise TapSolveError(feasibility_rate=rate, current_lambda=compiled.lam)
    if violations:
        logger.warning(f"{violations} feasible decodes exceed the approximation bound")
    logger.info(f"Best feasible true objective {best.true_objective:.10g} (seed {best.seed}), "
                f"feasibility rate {rate:.3f}")
    return StepOutcome(compiled=compiled, best=best, feasibility_rate=rate, n_trials=batch.n_trials,
                       n_feasible=n_feasible, bound_violations=violations, n_diverged=batch.n_diverged)


def _widen(low: float, high: float, width: float) -> tuple:
    return (low, low + width) if high - low < width else (low, high)


def shared_fits(network: TrafficNetwork, plan: DiscretizationPlan,
                route_sets: Sequence[Sequence[Route]],
                min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS,
                n_samples: int = DEFAULT_SAMPLES) -> Dict[str, QuadraticFit]:
    """One quadratic over [min f0, max(f0 + reachable extra flow)] of the traversed links."""
    _, extra = reachable_extra_flow(network, plan, route_sets)
    touched = np.flatnonzero(extra > 0)
    if len(touched) == 0:
        return {}
    f0 = network.initial_flows
    interval = _widen(float(f0[touched].min()), float((f0 + extra)[touched].max()),
                      min_width_groups * plan.group_size)
    shared = fit_shared([network.links[a] for a in touched], interval, n_samples)
    logger.info(f"Shared fit on [{interval[0]:g}, {interval[1]:g}]: gamma=({shared.gamma1:.8g}, "
                f"{shared.gamma2:.8g}, {shared.gamma3:.8g}), max relative error {shared.max_rel_error:.3e}")
    return {network.links[a].id: apply_fit(shared, network.links[a], n_samples=n_samples)
            for a in touched}


def refit_intervals(network: TrafficNetwork, plan: DiscretizationPlan,
                    route_sets: Sequence[Sequence[Route]], predicted_flows: np.ndarray,
                    min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS) -> Dict[int, tuple]:
    """
    Per-link step-2 interval around the predicted flow.

    [pred - reach, pred + reach] clipped to the reachable range [f0, f0 + reach],
    then widened to at least min_width_groups * g.
    """
    _, extra = reachable_extra_flow(network, plan, route_sets)
    predicted = np.asarray(predicted_flows, dtype=float)
    intervals = {}
    for a in np.flatnonzero(extra > 0):
        f0, reach = network.initial_flows[a], extra[a]
        low = max(f0, predicted[a] - reach)
        high = min(f0 + reach, predicted[a] + reach)
        intervals[int(a)] = _widen(float(low), float(high), min_width_groups * plan.group_size)
    return intervals


def refit_links(network: TrafficNetwork, plan: DiscretizationPlan,
                route_sets: Sequence[Sequence[Route]], predicted_flows: np.ndarray,
                min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS,
                n_samples: int = DEFAULT_SAMPLES) -> Dict[str, QuadraticFit]:
    intervals = refit_intervals(network, plan, route_sets, predicted_flows, min_width_groups)
    return {network.links[a].id: fit_quadratic(network.links[a], interval, n_samples)
            for a, interval in intervals.items()}


def compile_refit(network: TrafficNetwork, plan: DiscretizationPlan,
                  route_sets: Sequence[Sequence[Route]], predicted_flows: np.ndarray,
                  lam: Optional[float] = None,
                  min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS,
                  n_samples: int = DEFAULT_SAMPLES) -> CompiledTap:
    """Step-2 model: per-link fits around predicted flows, lambda rechosen unless fixed."""
    fits = refit_links(network, plan, route_sets, predicted_flows, min_width_groups, n_samples)
    penalty = lam if lam is not None else choose_lambda(network, plan, route_sets, fits)
    return compile_tap(network, plan, route_sets, fits, penalty)


def solve_one_step(network: TrafficNetwork, plan: DiscretizationPlan,
                   route_sets: Sequence[Sequence[Route]], solver: TapSolver, n_trials: int,
                   base_seed: int = 0, lam: Optional[float] = None,
                   min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS,
                   n_samples: int = DEFAULT_SAMPLES) -> StepOutcome:
    """Compile with the shared fit and solve once."""
    fits = shared_fits(network, plan, route_sets, min_width_groups, n_samples)
    penalty = lam if lam is not None else choose_lambda(network, plan, route_sets, fits)
    compiled = compile_tap(network, plan, route_sets, fits, penalty)
    return solve_compiled(compiled, solver, n_trials, base_seed)


def two_step_solve(network: TrafficNetwork, plan: DiscretizationPlan,
                   route_sets: Sequence[Sequence[Route]], solver: TapSolver, n_trials: int,
                   base_seed: int = 0, lam: Optional[float] = None,
                   min_width_groups: float = DEFAULT_MIN_WIDTH_GROUPS,
                   n_samples: int = DEFAULT_SAMPLES) -> TwoStepResult:
    """
    Shared-fit solve, per-link refit around its flows, then a second solve.

    Args:
        network: Network with background flows
        plan: Vehicle groups
        route_sets: Routes per group
        solver: Batch solver (see make_solver)
        n_trials: Trials per step
        base_seed: First seed of both steps
        lam: Fixed penalty coefficient; chosen per step when None
        min_width_groups: Minimum interval width in groups
        n_samples: Fit samples per interval

    Returns:
        TwoStepResult with both best feasible decodes

    Raises:
        TapSolveError: a step has no feasible trial
    """
    step1 = solve_one_step(network, plan, route_sets, solver, n_trials, base_seed, lam,
                           min_width_groups, n_samples)
    compiled = compile_refit(network, plan, route_sets, step1.best.link_flows, lam,
                             min_width_groups, n_samples)
    step2 = solve_compiled(compiled, solver, n_trials, base_seed)
    logger.info(f"Two-step solve: step 1 {step1.best.true_objective:.10g}, "
                f"step 2 {step2.best.true_objective:.10g}")
    return TwoStepResult(step1=step1, step2=step2)


def feasibility_evaluator(compiled: CompiledTap, n_trials: int, base_seed: int = 0,
                          reference_objective: Optional[float] = None, tolerance: float = 1e-3,
                          max_workers: Optional[int] = None) -> Callable[[SolverParams], Dict[str, float]]:
    """
    Per-variant feasibility rate of a compiled instance for one parameter set.

    With a reference objective, "<variant>.within" is the share of completed
    trials whose true objective lies within `tolerance` (relative) of it.
    """
    def evaluate(params: SolverParams) -> Dict[str, float]:
        rates = {}
        for name in (GFSNN, SNN):
            batch = make_solver(name, params, max_workers=max_workers)(compiled.model, n_trials, base_seed)
            decoded = [decode(compiled, trial.spins) for trial in batch.trials]
            feasible = [d for d in decoded if d.feasible]
            rates[f"{name}.feasible"] = len(feasible) / batch.n_completed
            if reference_objective is not None:
                limit = reference_objective + tolerance * abs(reference_objective)
                rates[f"{name}.within"] = sum(d.true_objective <= limit for d in feasible) / batch.n_completed
        return rates

    return evaluate
