"""
Seeded network generators

grid_network builds the row-major grid fixtures, beijing_scale_network a
synthetic stand-in with the size of the Third Ring Road instance.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..errors import InputError
from .network import Link, Node, OdDemand, TrafficNetwork

logger = logging.getLogger(__name__)

# (origin, destination, demand) on the row-major 5x5 grid.
GRID_OD_PAIRS: Tuple[Tuple[int, int, float], ...] = (
    (1, 25, 5), (2, 20, 5), (3, 23, 5), (4, 24, 5), (5, 21, 5),
    (6, 24, 5), (10, 16, 5), (11, 15, 5), (15, 11, 5), (16, 10, 5),
    (20, 2, 5), (21, 5, 5), (23, 3, 5), (24, 6, 5), (25, 1, 5),
)

GRID_COMMENTS: Tuple[str, ...] = (
    "5x5 grid: t0=1, capacity=25, 15 OD pairs of demand 5, no background flow",
    "Row-major numbering: node r*5+c+1 sits at x=c, y=4-r (node 1 top-left).",
)

# (origin number, destination number, demand), O1..O5 to D1..D5; 1600 vehicles in total.
BEIJING_OD_PROFILE: Tuple[Tuple[int, int, float], ...] = (
    (1, 2, 30), (1, 3, 30), (1, 4, 10), (1, 5, 30),
    (2, 1, 140), (2, 2, 60), (2, 3, 80), (2, 4, 30), (2, 5, 50),
    (3, 1, 120), (3, 2, 40), (3, 3, 60), (3, 4, 30), (3, 5, 10),
    (4, 2, 120), (4, 3, 120), (4, 4, 80), (4, 5, 80),
    (5, 4, 180), (5, 5, 300),
)

FREE_FLOW_SPEED = 16.67  # m/s, 60 km/h
BEIJING_ROWS, BEIJING_COLS = 9, 10
BEIJING_DIAGONALS = 45
BEIJING_SPACING = 400.0
BEIJING_JITTER = 80.0
BEIJING_CAPACITY = 1600.0


def _links_from_graph(graph: nx.Graph, node_ids: Dict[tuple, str], t0: Dict[frozenset, float],
                      capacity: float) -> List[Link]:
    """One link per direction of every undirected edge, numbered in row-major tail order."""
    links = []
    for cell in sorted(graph.nodes):
        for neighbor in sorted(graph.neighbors(cell)):
            links.append(Link(id=str(len(links) + 1), tail=node_ids[cell], head=node_ids[neighbor],
                              t0=t0[frozenset((cell, neighbor))], capacity=capacity))
    return links


def grid_network(rows: int = 5, cols: int = 5, t0: float = 1.0, capacity: float = 25.0,
                 od_pairs: Optional[Sequence[Tuple[int, int, float]]] = None) -> TrafficNetwork:
    """
    Bidirectional grid with row-major node ids 1..rows*cols.

    Node (r, c) has id r*cols + c + 1 and coordinates x=c, y=rows-1-r, so node 1
    sits top-left. With the defaults this is the 25-node, 80-link fixture
    carrying the 15 OD pairs of demand 5.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InputError(f"Grid needs at least two nodes, got {rows}x{cols}")
    graph = nx.grid_2d_graph(rows, cols)
    node_ids = {(r, c): str(r * cols + c + 1) for r, c in graph.nodes}
    nodes = [Node(node_ids[(r, c)], float(c), float(rows - 1 - r)) for r, c in sorted(graph.nodes)]
    costs = {frozenset(edge): t0 for edge in graph.edges}
    links = _links_from_graph(graph, node_ids, costs, capacity)

    if od_pairs is None:
        od_pairs = GRID_OD_PAIRS if (rows, cols) == (5, 5) else ()
    demands = [OdDemand(str(o), str(d), float(q)) for o, d, q in od_pairs]
    return TrafficNetwork(nodes, links, demands)


def synthetic_initial_flows(network: TrafficNetwork, seed: int = 0, low: float = 0.1,
                            high: float = 0.6) -> np.ndarray:
    """
    Background flows drawn per link as capacity * U(low, high), rounded to whole vehicles.

    Stands in for measured background traffic when none is available.
    """
    if not 0.0 <= low <= high:
        raise InputError(f"Need 0 <= low <= high, got low={low}, high={high}")
    rng = np.random.default_rng(seed)
    return np.round(network.capacity * rng.uniform(low, high, size=network.n_links))


def beijing_scale_network(seed: int = 0, background: bool = True) -> TrafficNetwork:
    """
    Synthetic 89-node / 408-link network with the 20-pair, 1600-vehicle OD profile.

    A 9x10 grid without its last corner (89 nodes, 159 edges) gains 45 seeded
    cell diagonals, one per chosen cell, for 204 two-way streets. Node
    positions are jittered, free-flow times follow from 60 km/h, every link has
    capacity 1600 and O1..O5, D1..D5 are ten distinct seeded nodes.
    """
    rng = np.random.default_rng(seed)
    graph = nx.grid_2d_graph(BEIJING_ROWS, BEIJING_COLS)
    corner = (BEIJING_ROWS - 1, BEIJING_COLS - 1)
    graph.remove_node(corner)

    cells = [(r, c) for r in range(BEIJING_ROWS - 1) for c in range(BEIJING_COLS - 1)]
    chosen = sorted(rng.choice(len(cells), size=BEIJING_DIAGONALS, replace=False))
    for index in chosen:
        r, c = cells[index]
        diagonals = [((r, c), (r + 1, c + 1)), ((r, c + 1), (r + 1, c))]
        first = diagonals[int(rng.integers(2))]
        edge = first if corner not in first else next(d for d in diagonals if d is not first)
        graph.add_edge(*edge)

    ordered = sorted(graph.nodes)
    node_ids = {cell: str(number) for number, cell in enumerate(ordered, start=1)}
    jitter = rng.uniform(-BEIJING_JITTER, BEIJING_JITTER, size=(len(ordered), 2))
    position = {(r, c): (c * BEIJING_SPACING + jitter[i, 0],
                         (BEIJING_ROWS - 1 - r) * BEIJING_SPACING + jitter[i, 1])
                for i, (r, c) in enumerate(ordered)}
    nodes = [Node(node_ids[cell], *position[cell]) for cell in ordered]

    t0 = {}
    for u, v in graph.edges:
        length = float(np.hypot(position[u][0] - position[v][0], position[u][1] - position[v][1]))
        t0[frozenset((u, v))] = length / FREE_FLOW_SPEED
    links = _links_from_graph(graph, node_ids, t0, BEIJING_CAPACITY)

    endpoints = rng.choice(len(ordered), size=10, replace=False)
    origins = [node_ids[ordered[i]] for i in endpoints[:5]]
    destinations = [node_ids[ordered[i]] for i in endpoints[5:]]
    demands = [OdDemand(origins[o - 1], destinations[d - 1], float(q))
               for o, d, q in BEIJING_OD_PROFILE]

    network = TrafficNetwork(nodes, links, demands)
    if background:
        network = network.with_initial_flows(synthetic_initial_flows(network, seed))
    logger.info(f"Generated Beijing-scale network (seed={seed}): {network!r}")
    return network
