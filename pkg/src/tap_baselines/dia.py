"""
Dijkstra-based incremental assignment (DIA)

Demand is cut into vehicle groups of the discretization size; the groups are
loaded one after another in a seeded random order, each onto the shortest
route under the flows assigned so far.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import worker_count
from ..errors import InputError
from ..traffic import Route, TrafficNetwork, beckmann_objective, link_times, shortest_path, split_demand

logger = logging.getLogger(__name__)

GroupKey = Tuple[int, int]


@dataclass
class DiaResult:
    """
    One incremental assignment.

    Attributes:
        link_flows: Total link flows (background plus assigned)
        group_routes: Route of each (od_index, group_index), in canonical order
        group_sizes: Vehicles of each group
        objective: Beckmann objective of link_flows
        order_seed: Seed of the increment order
    """
    link_flows: np.ndarray
    group_routes: Dict[GroupKey, Route]
    group_sizes: Dict[GroupKey, float]
    objective: float
    order_seed: int

    def routes_for_od(self, od_index: int) -> List[Route]:
        return [route for (od, _), route in self.group_routes.items() if od == od_index]

    @property
    def assigned_flow(self) -> float:
        return float(sum(self.group_sizes.values()))


@dataclass
class DiaBatch:
    """Seed-ordered DIA results with the best (lowest objective, lowest seed) one."""
    best: DiaResult
    results: List[DiaResult]

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.results])


def demand_groups(network: TrafficNetwork, group_size: float) -> Dict[GroupKey, float]:
    """Every vehicle group keyed by (od_index, group_index) in canonical order."""
    groups = {}
    for od_index, od in enumerate(network.od_pairs):
        for group_index, size in enumerate(split_demand(od.demand, group_size)):
            groups[(od_index, group_index)] = size
    return groups


def dia(network: TrafficNetwork, group_size: float, order_seed: int = 0) -> DiaResult:
    """
    Incremental all-or-nothing assignment of vehicle groups.

    Args:
        network: Network with OD demands and background flows
        group_size: Vehicles per increment (the last group of an OD may be smaller)
        order_seed: Seed of the increment permutation

    Returns:
        DiaResult

    Raises:
        NoPathError: an OD pair is unreachable
    """
    groups = demand_groups(network, group_size)
    keys = list(groups)
    order = np.random.default_rng(order_seed).permutation(len(keys))

    flows = np.array(network.initial_flows, dtype=float)
    chosen: Dict[GroupKey, Route] = {}
    for position in order:
        key = keys[position]
        od = network.od_pairs[key[0]]
        route = shortest_path(network, link_times(network, flows), od.origin, od.destination)
        flows[list(route.links)] += groups[key]
        chosen[key] = route

    return DiaResult(link_flows=flows, group_routes={key: chosen[key] for key in keys},
                     group_sizes=groups, objective=beckmann_objective(network, flows),
                     order_seed=order_seed)


def dia_batch(network: TrafficNetwork, group_size: float, n_trials: int, base_seed: int = 0,
              max_workers: Optional[int] = None) -> DiaBatch:
    """Run DIA over order seeds base_seed .. base_seed + n_trials - 1."""
    if n_trials < 1:
        raise InputError(f"n_trials must be at least 1, got {n_trials}")
    seeds = range(base_seed, base_seed + n_trials)
    workers = worker_count() if max_workers is None else max_workers
    if workers > 1 and n_trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda seed: dia(network, group_size, seed), seeds))
    else:
        results = [dia(network, group_size, seed) for seed in seeds]

    best = results[0]
    for result in results[1:]:
        if result.objective < best.objective:
            best = result
    objectives = np.array([r.objective for r in results])
    logger.info(f"DIA over {n_trials} orders: best {best.objective:.10g} (seed {best.order_seed}), "
                f"mean {objectives.mean():.10g}, worst {objectives.max():.10g}")
    return DiaBatch(best=best, results=results)
