"""
Frank-Wolfe user-equilibrium assignment

Background flows f0 stay fixed; only the OD demand is assigned. Each
iteration loads all demand onto current shortest paths (all-or-nothing) and
moves towards that pattern with an exact line search.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..errors import InputError
from ..traffic import Route, TrafficNetwork, beckmann_objective, link_times, shortest_path

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 500
DEFAULT_GAP_TOL = 1e-8
LINE_SEARCH_TOL = 1e-10

FW_LOG_HEADER = ["iter", "objective", "relative_gap"]


@dataclass
class FwResult:
    """
    Outcome of a Frank-Wolfe run.

    Attributes:
        link_flows: Total link flows (background plus assigned)
        objective: Beckmann objective of link_flows
        iterations: Line-search steps taken
        relative_gap_history: Relative gap measured at every visited point
        objective_history: Objective at every visited point (non-increasing)
        path_flows: Per OD index, assigned flow carried by each route
    """
    link_flows: np.ndarray
    objective: float
    iterations: int
    relative_gap_history: np.ndarray
    objective_history: np.ndarray
    path_flows: Dict[int, Dict[Route, float]] = field(default_factory=dict)

    @property
    def relative_gap(self) -> float:
        return float(self.relative_gap_history[-1])


def all_or_nothing(network: TrafficNetwork, times: np.ndarray) -> Tuple[np.ndarray, List[Route]]:
    """Load every OD demand onto its shortest route under the given link times."""
    flows = np.zeros(network.n_links)
    routes = []
    for od in network.od_pairs:
        route = shortest_path(network, times, od.origin, od.destination)
        flows[list(route.links)] += od.demand
        routes.append(route)
    return flows, routes


def _line_search(network: TrafficNetwork, total: np.ndarray, direction: np.ndarray) -> float:
    """Step in [0, 1] where the directional derivative sum t(f + s d) * d changes sign."""
    def slope(step: float) -> float:
        return float(np.dot(link_times(network, np.maximum(total + step * direction, 0.0)),
                            direction))

    if slope(1.0) <= 0.0:
        return 1.0
    low, high = 0.0, 1.0
    while high - low > LINE_SEARCH_TOL:
        middle = 0.5 * (low + high)
        if slope(middle) > 0.0:
            high = middle
        else:
            low = middle
    return 0.5 * (low + high)


def frank_wolfe(network: TrafficNetwork, max_iters: int = DEFAULT_MAX_ITERS,
                gap_tol: float = DEFAULT_GAP_TOL) -> FwResult:
    """
    Solve the Beckmann program by Frank-Wolfe with exact line search.

    Args:
        network: Network with OD demands and fixed background flows
        max_iters: Maximum number of line-search steps
        gap_tol: Stop once the relative gap falls below this value

    Returns:
        FwResult at the last visited point

    Raises:
        NoPathError: an OD pair is unreachable (raised before the first step)
    """
    if max_iters < 0:
        raise InputError(f"max_iters must be non-negative, got {max_iters}")
    background = network.initial_flows

    assigned, routes = all_or_nothing(network, link_times(network, background))
    path_flows = {i: {route: od.demand} for i, (od, route) in enumerate(zip(network.od_pairs, routes))}

    objective = beckmann_objective(network, background + assigned)
    objectives, gaps = [objective], []
    best_bound = -np.inf
    iterations = 0

    while True:
        total = background + assigned
        times = link_times(network, total)
        target, routes = all_or_nothing(network, times)
        direction = target - assigned
        best_bound = max(best_bound, objective + float(np.dot(times, direction)))
        # A network without demand or background has a zero objective.
        scale = abs(objective) if objective != 0.0 else 1.0
        gaps.append((objective - best_bound) / scale)
        if gaps[-1] < gap_tol or iterations >= max_iters:
            break

        step = _line_search(network, total, direction)
        candidate = np.maximum(assigned + step * direction, 0.0)
        candidate_objective = beckmann_objective(network, background + candidate)
        if candidate_objective > objective:
            logger.debug(f"Frank-Wolfe stalled at iteration {iterations}: step {step:.3e} "
                         f"does not decrease the objective")
            break

        assigned, objective = candidate, candidate_objective
        for index, (od, route) in enumerate(zip(network.od_pairs, routes)):
            flows = path_flows[index]
            for known in flows:
                flows[known] *= 1.0 - step
            flows[route] = flows.get(route, 0.0) + step * od.demand
        iterations += 1
        objectives.append(objective)

    logger.info(f"Frank-Wolfe finished after {iterations} iterations: objective {objective:.10g}, "
                f"relative gap {gaps[-1]:.3e}")
    return FwResult(link_flows=background + assigned, objective=objective, iterations=iterations,
                    relative_gap_history=np.array(gaps), objective_history=np.array(objectives),
                    path_flows=path_flows)


def round_flows(network: TrafficNetwork, flows, unit: float) -> np.ndarray:
    """Snap the assigned part of total link flows to multiples of the discretization unit."""
    if not unit > 0:
        raise InputError(f"Rounding unit must be positive, got {unit}")
    assigned = np.asarray(flows, dtype=float) - network.initial_flows
    return network.initial_flows + np.maximum(np.round(assigned / unit) * unit, 0.0)


def write_fw_log(result: FwResult, path: Union[str, Path]) -> Path:
    """Convergence log: one row per visited point."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(FW_LOG_HEADER)
        for index, (objective, gap) in enumerate(zip(result.objective_history,
                                                     result.relative_gap_history)):
            writer.writerow([index, repr(float(objective)), repr(float(gap))])
    return path
