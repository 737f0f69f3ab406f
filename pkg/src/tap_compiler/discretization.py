"""
Vehicle-group discretization and per-group route sets
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import InputError
from ..traffic import Route, TrafficNetwork, split_demand

logger = logging.getLogger(__name__)

GroupKey = Tuple[int, int]


@dataclass(frozen=True)
class DiscretizationPlan:
    """
    Vehicle groups of a network's OD demand.

    Attributes:
        group_size: Nominal vehicles per group (g)
        groups: (od_index, group_index) of every group in canonical order
        sizes: Vehicles of each group; an OD's last group may be smaller
        routes_per_group: Alternative routes wanted per group (M)
    """
    group_size: float
    groups: Tuple[GroupKey, ...]
    sizes: Tuple[float, ...]
    routes_per_group: int = 3

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def partial_groups(self) -> List[GroupKey]:
        """Groups smaller than group_size (OD remainders)."""
        return [key for key, size in zip(self.groups, self.sizes)
                if size < self.group_size * (1 - 1e-9)]

    @property
    def n_spins(self) -> int:
        """N * M + 1 when every group receives M routes."""
        return self.n_groups * self.routes_per_group + 1

    def groups_of_od(self, od_index: int) -> List[int]:
        return [i for i, (od, _) in enumerate(self.groups) if od == od_index]


def build_plan(network: TrafficNetwork, group_size: float, routes_per_group: int = 3) -> DiscretizationPlan:
    """Split every OD demand into groups of group_size vehicles."""
    if routes_per_group < 1:
        raise InputError(f"routes_per_group must be at least 1, got {routes_per_group}")
    groups, sizes = [], []
    for od_index, od in enumerate(network.od_pairs):
        for group_index, size in enumerate(split_demand(od.demand, group_size)):
            groups.append((od_index, group_index))
            sizes.append(size)
    plan = DiscretizationPlan(group_size=float(group_size), groups=tuple(groups),
                              sizes=tuple(sizes), routes_per_group=routes_per_group)
    if plan.partial_groups:
        logger.warning(f"{len(plan.partial_groups)} OD demands are not multiples of g={group_size}; "
                       f"their last group is smaller")
    logger.info(f"Discretized {network.total_demand:g} vehicles into {plan.n_groups} groups "
                f"of {group_size:g}")
    return plan


def group_route_sets(plan: DiscretizationPlan,
                     od_route_sets: Dict[int, Sequence[Route]]) -> List[List[Route]]:
    """Give every group of an OD that OD's route set."""
    sets = []
    for od_index, _ in plan.groups:
        if od_index not in od_route_sets or not od_route_sets[od_index]:
            raise InputError(f"No route set for OD index {od_index}")
        sets.append(list(od_route_sets[od_index]))
    return sets


def variable_offsets(route_sets: Sequence[Sequence[Route]]) -> np.ndarray:
    """Index of each group's first binary variable; the last entry is the variable count."""
    return np.concatenate(([0], np.cumsum([len(routes) for routes in route_sets]))).astype(int)


def incidence_matrix(network: TrafficNetwork, plan: DiscretizationPlan,
                     route_sets: Sequence[Sequence[Route]]) -> np.ndarray:
    """
    Flow map A with f = f0 + A q.

    A[a, v] is the group size of variable v when its route uses link a.
    """
    if len(route_sets) != plan.n_groups:
        raise InputError(f"Expected {plan.n_groups} route sets, got {len(route_sets)}")
    offsets = variable_offsets(route_sets)
    matrix = np.zeros((network.n_links, offsets[-1]))
    for i, routes in enumerate(route_sets):
        od = network.od_pairs[plan.groups[i][0]]
        if len(set(routes)) != len(routes):
            raise InputError(f"Group {plan.groups[i]} has duplicate routes")
        for j, route in enumerate(routes):
            if route.origin != od.origin or route.destination != od.destination:
                raise InputError(f"Route of group {plan.groups[i]} does not join {od.origin}->{od.destination}")
            matrix[list(route.links), offsets[i] + j] = plan.sizes[i]
    return matrix


def reachable_extra_flow(network: TrafficNetwork, plan: DiscretizationPlan,
                         route_sets: Sequence[Sequence[Route]]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Co-traversal per link.

    Returns:
        (counts, extra): number of groups whose route set touches each link and
        the largest flow one-hot assignments can add to it.
    """
    counts = np.zeros(network.n_links, dtype=int)
    extra = np.zeros(network.n_links)
    for i, routes in enumerate(route_sets):
        touched = sorted({a for route in routes for a in route.links})
        counts[touched] += 1
        extra[touched] += plan.sizes[i]
    return counts, extra
