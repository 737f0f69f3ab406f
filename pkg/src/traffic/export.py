"""
Flow and heat-map CSV export
"""

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import InputError
from .costs import link_times
from .network import TrafficNetwork

logger = logging.getLogger(__name__)

FLOW_HEADER = ["link_id", "tail", "head", "flow", "time"]
HEATMAP_HEADER = ["x", "y", "flow"]


def write_flow_csv(network: TrafficNetwork, flows, path: Union[str, Path]) -> Path:
    """One row per link: id, endpoints, total flow and its BPR time."""
    flows = np.asarray(flows, dtype=float)
    times = link_times(network, flows)
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(FLOW_HEADER)
        for link, flow, time in zip(network.links, flows, times):
            writer.writerow([link.id, link.tail, link.head, repr(float(flow)), repr(float(time))])
    return path


def write_heatmap_csv(network: TrafficNetwork, flows, path: Union[str, Path]) -> Path:
    """
    Link flows placed at link midpoints, ready for any scatter or heat-map plot.

    Raises:
        InputError: a node has no coordinates
    """
    missing = [node.id for node in network.nodes if not node.has_coordinates]
    if missing:
        raise InputError(f"Heat-map export needs node coordinates; missing for {missing[:5]}")
    flows = np.asarray(flows, dtype=float)
    if flows.shape != (network.n_links,):
        raise InputError(f"Expected {network.n_links} flows, got shape {flows.shape}")

    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(HEATMAP_HEADER)
        for link, flow in zip(network.links, flows):
            tail, head = network.node_by_id[link.tail], network.node_by_id[link.head]
            writer.writerow([repr((tail.x + head.x) / 2), repr((tail.y + head.y) / 2),
                             repr(float(flow))])
    logger.debug(f"Wrote heat map for {network.n_links} links to {path}")
    return path
