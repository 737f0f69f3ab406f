"""
Shortest paths and Yen's k shortest loopless paths

Ties are broken by the lexicographically smallest node sequence, then by link
ids, so grid networks with many equal-cost paths give reproducible answers.
"""

import heapq
import logging
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from ..errors import InputError, NoPathError
from .network import Route, TrafficNetwork, sort_key

logger = logging.getLogger(__name__)


def route_cost(route: Route, link_costs: np.ndarray) -> float:
    """Sum of link costs accumulated from the origin outwards."""
    total = 0.0
    for index in route.links:
        total += float(link_costs[index])
    return total


def route_key(network: TrafficNetwork, route: Route) -> tuple:
    return (tuple(sort_key(n) for n in route.nodes),
            tuple(sort_key(network.links[i].id) for i in route.links))


def shortest_path(network: TrafficNetwork, link_costs, origin: str, destination: str,
                  banned_links: FrozenSet[int] = frozenset(),
                  banned_nodes: FrozenSet[str] = frozenset()) -> Route:
    """
    Dijkstra with lexicographic tie-breaking.

    Labels are compared as (cost, node-key sequence, link-key sequence); the
    order is preserved under extension, so the label-setting scheme stays
    exact with ties.

    Args:
        network: Network to search
        link_costs: Non-negative cost per link index
        origin: Origin node id
        destination: Destination node id
        banned_links: Link indices that may not be used
        banned_nodes: Node ids that may not be entered

    Returns:
        Minimal-cost loopless Route

    Raises:
        NoPathError: destination unreachable
    """
    costs = np.asarray(link_costs, dtype=float)
    if costs.shape != (network.n_links,):
        raise InputError(f"Expected {network.n_links} link costs, got shape {costs.shape}")
    if np.any(costs < 0):
        raise InputError("Link costs must be non-negative")
    if origin not in network.node_by_id or destination not in network.node_by_id:
        raise InputError(f"Unknown origin or destination: {origin}, {destination}")
    if origin in banned_nodes:
        raise NoPathError(origin, destination)

    start = (0.0, (sort_key(origin),), (), origin, (origin,), ())
    heap = [start]
    best = {origin: start[:3]}
    settled = set()

    while heap:
        cost, node_keys, link_keys, node, nodes, links = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == destination:
            return Route(links=links, nodes=nodes)
        for index in network.outgoing[node]:
            if index in banned_links:
                continue
            link = network.links[index]
            head = link.head
            if head in settled or head in banned_nodes:
                continue
            label = (cost + float(costs[index]),
                     node_keys + (sort_key(head),),
                     link_keys + (sort_key(link.id),))
            if head not in best or label < best[head]:
                best[head] = label
                heapq.heappush(heap, label + (head, nodes + (head,), links + (index,)))

    raise NoPathError(origin, destination)


def k_shortest_paths(network: TrafficNetwork, link_costs, origin: str, destination: str,
                     k: int) -> List[Route]:
    """
    Yen's algorithm: up to k loopless routes in non-decreasing cost order.

    Candidates of equal cost are ordered by route_key.
    """
    if k < 1:
        return []
    costs = np.asarray(link_costs, dtype=float)
    accepted: List[Route] = [shortest_path(network, costs, origin, destination)]
    candidates: List[Tuple[float, tuple, Route]] = []
    known = {accepted[0]}

    while len(accepted) < k:
        previous = accepted[-1]
        for i in range(len(previous.links)):
            spur_node = previous.nodes[i]
            root_nodes = previous.nodes[:i + 1]
            root_links = previous.links[:i]

            banned_links = set()
            for route in accepted:
                if route.nodes[:i + 1] == root_nodes and route.links[:i] == root_links \
                        and len(route.links) > i:
                    banned_links.add(route.links[i])
            banned_nodes = frozenset(root_nodes[:-1])

            try:
                spur = shortest_path(network, costs, spur_node, destination,
                                     frozenset(banned_links), banned_nodes)
            except NoPathError:
                continue
            candidate = Route(links=root_links + spur.links, nodes=root_nodes[:-1] + spur.nodes)
            if candidate in known:
                continue
            known.add(candidate)
            heapq.heappush(candidates, (route_cost(candidate, costs),
                                        route_key(network, candidate), candidate))

        if not candidates:
            break
        _, _, route = heapq.heappop(candidates)
        accepted.append(route)

    return accepted
