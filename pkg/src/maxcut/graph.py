"""
Weighted graphs in rudy format and seeded Max-Cut instance generators
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import InputError, ParseError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]

# Integer weight laws of the Biq Mac families: pm1s (+-1), pw01 (0..10), w01 (-10..10).
WEIGHT_LAWS = {
    "pm1s": (-1, 1),
    "pw01": (0, 10),
    "w01": (-10, 10),
}


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with integer edge weights, edges stored as (i, j, w) with i < j."""
    n_nodes: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InputError(f"A graph needs at least one node, got {self.n_nodes}")
        seen = set()
        normalized = []
        for i, j, w in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise InputError(f"Self-loop on node {i}")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise InputError(f"Edge ({i}, {j}) out of range for {self.n_nodes} nodes")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InputError(f"Duplicate edge {key}")
            seen.add(key)
            normalized.append((key[0], key[1], int(w)))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def weight_matrix(self) -> np.ndarray:
        weights = np.zeros((self.n_nodes, self.n_nodes))
        for i, j, w in self.edges:
            weights[i, j] = w
            weights[j, i] = w
        return weights


def parse_rudy(text: str, source: str = "<string>") -> WeightedGraph:
    """
    Parse rudy text: a header "n m" then m lines "i j w" with 1-based nodes.

    Raises:
        ParseError: malformed line, index out of range or duplicate edge
    """
    lines = [(number, raw.split()) for number, raw in enumerate(text.splitlines(), start=1)
             if raw.strip()]
    if not lines:
        raise ParseError("missing header line 'n m'", line_number=1, path=source)

    header_line, header = lines[0]
    try:
        if len(header) != 2:
            raise ValueError
        n_nodes, n_edges = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"header must be 'n m', got '{' '.join(header)}'",
                         line_number=header_line, path=source)
    if n_nodes < 1 or n_edges < 0:
        raise ParseError(f"invalid header values n={n_nodes} m={n_edges}",
                         line_number=header_line, path=source)

    body = lines[1:]
    if len(body) != n_edges:
        last = body[-1][0] if body else header_line
        raise ParseError(f"expected {n_edges} edge lines, found {len(body)}",
                         line_number=last, path=source)

    edges = []
    seen = set()
    for line_number, parts in body:
        try:
            if len(parts) != 3:
                raise ValueError
            i, j = int(parts[0]), int(parts[1])
            weight = float(parts[2])
            if weight != int(weight):
                raise ValueError
        except ValueError:
            raise ParseError(f"edge line must be 'i j w' with integer weight, got '{' '.join(parts)}'",
                             line_number=line_number, path=source)
        if not (1 <= i <= n_nodes and 1 <= j <= n_nodes) or i == j:
            raise ParseError(f"node index out of range or self-loop: ({i}, {j})",
                             line_number=line_number, path=source)
        key = (min(i, j) - 1, max(i, j) - 1)
        if key in seen:
            raise ParseError(f"duplicate edge ({i}, {j})", line_number=line_number, path=source)
        seen.add(key)
        edges.append((key[0], key[1], int(weight)))

    return WeightedGraph(n_nodes=n_nodes, edges=tuple(edges))


def format_rudy(graph: WeightedGraph) -> str:
    lines = [f"{graph.n_nodes} {len(graph.edges)}"]
    lines.extend(f"{i + 1} {j + 1} {w}" for i, j, w in graph.edges)
    return "\n".join(lines) + "\n"


def read_rudy(path: Union[str, Path]) -> WeightedGraph:
    path = Path(path)
    graph = parse_rudy(path.read_text(), source=str(path))
    logger.info(f"Loaded {path}: {graph.n_nodes} nodes, {len(graph.edges)} edges")
    return graph


def write_rudy(graph: WeightedGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_rudy(graph))
    return path


def random_graph(law: str, n_nodes: int, density: float = 0.1, seed: int = 0) -> WeightedGraph:
    """
    Seeded instance following one of the Biq Mac weight laws.

    Each node pair becomes an edge with probability `density`; its weight is a
    uniform integer of the law's interval. Zero draws are dropped, since a
    zero-weight edge is absent from a rudy file.
    """
    if law not in WEIGHT_LAWS:
        raise InputError(f"Unknown weight law '{law}', expected one of {sorted(WEIGHT_LAWS)}")
    if not 0.0 <= density <= 1.0:
        raise InputError(f"density must lie in [0, 1], got {density}")
    low, high = WEIGHT_LAWS[law]
    rng = np.random.default_rng(seed)

    edges = []
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if rng.random() >= density:
                continue
            if law == "pm1s":
                weight = int(rng.choice((-1, 1)))
            else:
                weight = int(rng.integers(low, high + 1))
            if weight != 0:
                edges.append((i, j, weight))
    return WeightedGraph(n_nodes=n_nodes, edges=tuple(edges))
