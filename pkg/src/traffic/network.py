"""
Road-network data model and the line-oriented network file format

    NODE <id> [<x> <y>]
    LINK <id> <tail> <head> <t0> <capacity> [<alpha> <beta>] [<init_flow>]
    OD <origin> <destination> <demand>

'#' starts a comment.
"""

import logging
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InputError, NoPathError, ParseError

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.15
DEFAULT_BETA = 4
LINK_COLUMNS_COMMENT = "LINK id tail head t0 capacity alpha beta init_flow"


def sort_key(identifier: str) -> Tuple[int, Union[int, str]]:
    """Numeric ids sort numerically and before non-numeric ids."""
    return (0, int(identifier)) if identifier.isdigit() else (1, identifier)


@dataclass(frozen=True)
class Node:
    id: str
    x: Optional[float] = None
    y: Optional[float] = None

    @property
    def has_coordinates(self) -> bool:
        return self.x is not None and self.y is not None


@dataclass(frozen=True)
class Link:
    """Directed link with BPR parameters and a fixed background flow."""
    id: str
    tail: str
    head: str
    t0: float
    capacity: float
    alpha: float = DEFAULT_ALPHA
    beta: int = DEFAULT_BETA
    initial_flow: float = 0.0

    def __post_init__(self):
        if not self.t0 > 0:
            raise InputError(f"Link {self.id}: free-flow time must be positive, got {self.t0}")
        if not self.capacity > 0:
            raise InputError(f"Link {self.id}: capacity must be positive, got {self.capacity}")
        if self.alpha < 0:
            raise InputError(f"Link {self.id}: alpha must be non-negative, got {self.alpha}")
        if int(self.beta) != self.beta or self.beta < 1:
            raise InputError(f"Link {self.id}: beta must be a positive integer, got {self.beta}")
        if self.initial_flow < 0:
            raise InputError(f"Link {self.id}: initial flow must be non-negative")
        if self.tail == self.head:
            raise InputError(f"Link {self.id}: tail and head coincide")
        object.__setattr__(self, "beta", int(self.beta))


@dataclass(frozen=True)
class OdDemand:
    origin: str
    destination: str
    demand: float

    def __post_init__(self):
        if not self.demand > 0:
            raise InputError(f"OD {self.origin}->{self.destination}: demand must be positive")
        if self.origin == self.destination:
            raise InputError(f"OD {self.origin}->{self.destination}: origin equals destination")


@dataclass(frozen=True)
class Route:
    """Loopless directed path; links hold indices into TrafficNetwork.links."""
    links: Tuple[int, ...]
    nodes: Tuple[str, ...]

    @property
    def origin(self) -> str:
        return self.nodes[0]

    @property
    def destination(self) -> str:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.links)


class TrafficNetwork:
    """Immutable directed network with BPR links and OD demands."""

    def __init__(self, nodes: Sequence[Node], links: Sequence[Link],
                 od_pairs: Sequence[OdDemand], check_connectivity: bool = True):
        """
        Initialize and validate a network.

        Args:
            nodes: Node list (ids unique)
            links: Link list (ids unique, endpoints existing)
            od_pairs: Demands between existing nodes
            check_connectivity: Verify every OD pair has a connecting path
        """
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        self.links: Tuple[Link, ...] = tuple(links)
        self.od_pairs: Tuple[OdDemand, ...] = tuple(od_pairs)

        self.node_by_id: Dict[str, Node] = {}
        for node in self.nodes:
            if node.id in self.node_by_id:
                raise InputError(f"Duplicate node id {node.id}")
            self.node_by_id[node.id] = node

        self.link_index: Dict[str, int] = {}
        for index, link in enumerate(self.links):
            if link.id in self.link_index:
                raise InputError(f"Duplicate link id {link.id}")
            for endpoint in (link.tail, link.head):
                if endpoint not in self.node_by_id:
                    raise InputError(f"Link {link.id} references unknown node {endpoint}")
            self.link_index[link.id] = index

        for od in self.od_pairs:
            for endpoint in (od.origin, od.destination):
                if endpoint not in self.node_by_id:
                    raise InputError(f"OD pair references unknown node {endpoint}")

        # Outgoing links per node, sorted so traversal order is deterministic.
        self.outgoing: Dict[str, List[int]] = {node.id: [] for node in self.nodes}
        for index, link in enumerate(self.links):
            self.outgoing[link.tail].append(index)
        for node_id, indices in self.outgoing.items():
            indices.sort(key=lambda i: (sort_key(self.links[i].head), sort_key(self.links[i].id)))

        self.t0 = np.array([link.t0 for link in self.links], dtype=float)
        self.capacity = np.array([link.capacity for link in self.links], dtype=float)
        self.alpha = np.array([link.alpha for link in self.links], dtype=float)
        self.beta = np.array([link.beta for link in self.links], dtype=int)
        self.initial_flows = np.array([link.initial_flow for link in self.links], dtype=float)
        for array in (self.t0, self.capacity, self.alpha, self.beta, self.initial_flows):
            array.setflags(write=False)

        if check_connectivity:
            for od in self.od_pairs:
                if not self._reachable(od.origin, od.destination):
                    raise NoPathError(od.origin, od.destination)

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def total_demand(self) -> float:
        return float(sum(od.demand for od in self.od_pairs))

    def _reachable(self, origin: str, destination: str) -> bool:
        seen = {origin}
        queue = deque([origin])
        while queue:
            node = queue.popleft()
            if node == destination:
                return True
            for index in self.outgoing[node]:
                head = self.links[index].head
                if head not in seen:
                    seen.add(head)
                    queue.append(head)
        return False

    def route_from_links(self, link_ids: Sequence[str]) -> Route:
        """Build a Route from link ids, checking connectivity and looplessness."""
        if not link_ids:
            raise InputError("A route needs at least one link")
        if link_ids[0] not in self.link_index:
            raise InputError(f"Unknown link id {link_ids[0]}")
        indices = []
        nodes = [self.links[self.link_index[link_ids[0]]].tail]
        for link_id in link_ids:
            if link_id not in self.link_index:
                raise InputError(f"Unknown link id {link_id}")
            link = self.links[self.link_index[link_id]]
            if link.tail != nodes[-1]:
                raise InputError(f"Link {link_id} does not continue the route at node {nodes[-1]}")
            indices.append(self.link_index[link_id])
            nodes.append(link.head)
        if len(set(nodes)) != len(nodes):
            raise InputError(f"Route {list(link_ids)} repeats a node")
        return Route(links=tuple(indices), nodes=tuple(nodes))

    def route_link_ids(self, route: Route) -> List[str]:
        return [self.links[i].id for i in route.links]

    def with_initial_flows(self, flows: np.ndarray) -> "TrafficNetwork":
        """Copy of the network with replaced background flows."""
        flows = np.asarray(flows, dtype=float)
        if flows.shape != (self.n_links,):
            raise InputError(f"Expected {self.n_links} flows, got shape {flows.shape}")
        links = [Link(l.id, l.tail, l.head, l.t0, l.capacity, l.alpha, l.beta, float(f))
                 for l, f in zip(self.links, flows)]
        return TrafficNetwork(self.nodes, links, self.od_pairs, check_connectivity=False)

    def __repr__(self) -> str:
        return (f"TrafficNetwork(nodes={len(self.nodes)}, links={self.n_links}, "
                f"od_pairs={len(self.od_pairs)}, demand={self.total_demand:g})")


def parse_network(text: str, source: str = "<string>") -> TrafficNetwork:
    """Parse the NODE / LINK / OD text format."""
    nodes: List[Node] = []
    links: List[Link] = []
    od_pairs: List[OdDemand] = []

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].upper()
        try:
            if kind == "NODE" and len(parts) in (2, 4):
                if len(parts) == 4:
                    nodes.append(Node(parts[1], float(parts[2]), float(parts[3])))
                else:
                    nodes.append(Node(parts[1]))
            elif kind == "LINK" and len(parts) in (6, 7, 8, 9):
                link_id, tail, head = parts[1], parts[2], parts[3]
                t0, capacity = float(parts[4]), float(parts[5])
                alpha, beta, init_flow = DEFAULT_ALPHA, DEFAULT_BETA, 0.0
                if len(parts) >= 8:
                    alpha = float(parts[6])
                    beta_value = float(parts[7])
                    if beta_value != int(beta_value):
                        raise ValueError(f"beta must be an integer, got {parts[7]}")
                    beta = int(beta_value)
                if len(parts) in (7, 9):
                    init_flow = float(parts[-1])
                links.append(Link(link_id, tail, head, t0, capacity, alpha, beta, init_flow))
            elif kind == "OD" and len(parts) == 4:
                od_pairs.append(OdDemand(parts[1], parts[2], float(parts[3])))
            else:
                raise ValueError(f"unrecognized line '{line}'")
        except (ValueError, InputError) as e:
            raise ParseError(str(e), line_number=line_number, path=source) from e

    try:
        return TrafficNetwork(nodes, links, od_pairs)
    except InputError as e:
        raise ParseError(str(e), path=source) from e


def read_network(path: Union[str, Path]) -> TrafficNetwork:
    path = Path(path)
    network = parse_network(path.read_text(), source=str(path))
    logger.info(f"Loaded {path}: {network!r}")
    return network


def format_network(network: TrafficNetwork, comments: Sequence[str] = ()) -> str:
    """Serialize in the file format, led by the given comment lines and the LINK column legend."""
    lines = [f"# {comment}" for comment in comments]
    lines.append(f"# {LINK_COLUMNS_COMMENT}")
    for node in network.nodes:
        if node.has_coordinates:
            lines.append(f"NODE {node.id} {node.x:g} {node.y:g}")
        else:
            lines.append(f"NODE {node.id}")
    for link in network.links:
        lines.append(f"LINK {link.id} {link.tail} {link.head} {link.t0!r} {link.capacity!r} "
                     f"{link.alpha!r} {link.beta} {link.initial_flow!r}")
    for od in network.od_pairs:
        lines.append(f"OD {od.origin} {od.destination} {od.demand!r}")
    return "\n".join(lines) + "\n"


def write_network(network: TrafficNetwork, path: Union[str, Path], comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.write_text(format_network(network, comments))
    return path


def split_demand(demand: float, group_size: float) -> List[float]:
    """
    Vehicle groups of one OD demand: full groups of group_size plus a smaller remainder.

    A remainder below 1e-9 * group_size is treated as rounding noise and dropped.
    """
    if not group_size > 0:
        raise InputError(f"group_size must be positive, got {group_size}")
    full = int(np.floor(demand / group_size + 1e-9))
    groups = [float(group_size)] * full
    remainder = demand - full * group_size
    if remainder > 1e-9 * group_size:
        groups.append(float(remainder))
    return groups
