"""
Alternative route sets per OD pair

R1 is the route the incremental (DIA) assignment loads most for the OD,
R2 the first free-flow Yen path distinct from R1, R3 a low-overlap detour
from the same list.
"""

import logging
from collections import Counter
from typing import Dict, List, Protocol, Sequence

from .network import Route, TrafficNetwork
from .paths import k_shortest_paths, route_key

logger = logging.getLogger(__name__)

DEFAULT_ROUTES = 3
DEFAULT_YEN_K = 10
DEFAULT_MAX_OVERLAP = 0.5


class AssignmentRoutes(Protocol):
    def routes_for_od(self, od_index: int) -> List[Route]:
        ...


def link_overlap(route: Route, other: Route) -> float:
    """Share of route's links that also belong to other."""
    return len(set(route.links) & set(other.links)) / len(route.links)


def most_used_route(network: TrafficNetwork, routes: Sequence[Route]) -> Route:
    counts = Counter(routes)
    return min(counts, key=lambda r: (-counts[r], route_key(network, r)))


def generate_route_set(network: TrafficNetwork, od_index: int, dia_solution: AssignmentRoutes,
                       max_routes: int = DEFAULT_ROUTES, yen_k: int = DEFAULT_YEN_K,
                       max_overlap: float = DEFAULT_MAX_OVERLAP) -> List[Route]:
    """
    Build [R1, R2, R3] for one OD pair.

    Args:
        network: Network the OD belongs to
        od_index: Index into network.od_pairs
        dia_solution: Incremental assignment result supplying R1
        max_routes: Routes wanted (3 in the standard setting)
        yen_k: Yen candidates examined for R2 replacement and R3
        max_overlap: Largest link overlap a detour may share with R1 or R2

    Returns:
        Pairwise distinct routes, fewer than max_routes when the network does
        not admit that many loopless routes.
    """
    od = network.od_pairs[od_index]
    free_flow = network.t0
    yen = k_shortest_paths(network, free_flow, od.origin, od.destination, max(yen_k, max_routes))

    dia_routes = dia_solution.routes_for_od(od_index)
    r1 = most_used_route(network, dia_routes) if dia_routes else yen[0]
    routes = [r1]

    if max_routes >= 2:
        r2 = next((r for r in yen if r not in routes), None)
        if r2 is not None:
            routes.append(r2)

    while len(routes) < max_routes:
        distinct = [r for r in yen if r not in routes]
        if not distinct:
            break
        detour = next((r for r in distinct
                       if all(link_overlap(r, chosen) <= max_overlap for chosen in routes)),
                      distinct[0])
        routes.append(detour)

    if len(routes) < max_routes:
        logger.warning(f"OD {od.origin}->{od.destination}: only {len(routes)} distinct loopless "
                       f"routes available, using M={len(routes)}")
    return routes


def generate_route_sets(network: TrafficNetwork, dia_solution: AssignmentRoutes,
                        max_routes: int = DEFAULT_ROUTES, yen_k: int = DEFAULT_YEN_K,
                        max_overlap: float = DEFAULT_MAX_OVERLAP) -> Dict[int, List[Route]]:
    """Route set of every OD pair, keyed by OD index."""
    return {index: generate_route_set(network, index, dia_solution, max_routes, yen_k, max_overlap)
            for index in range(len(network.od_pairs))}
