"""
BPR link travel times and the Beckmann objective
"""

import numpy as np

from ..errors import InputError
from .network import Link, TrafficNetwork


def bpr_time(link: Link, flow: float) -> float:
    """t0 * (1 + alpha * (flow / capacity) ** beta)."""
    if flow < 0:
        raise InputError(f"Link {link.id}: flow must be non-negative, got {flow}")
    return link.t0 * (1.0 + link.alpha * (flow / link.capacity) ** link.beta)


def _check_flows(network: TrafficNetwork, flows) -> np.ndarray:
    f = np.asarray(flows, dtype=float)
    if f.shape != (network.n_links,):
        raise InputError(f"Expected {network.n_links} link flows, got shape {f.shape}")
    if np.any(f < 0):
        raise InputError("Link flows must be non-negative")
    return f


def link_times(network: TrafficNetwork, flows) -> np.ndarray:
    """BPR times of every link at the given total flows."""
    f = _check_flows(network, flows)
    return network.t0 * (1.0 + network.alpha * (f / network.capacity) ** network.beta)


def beckmann_integral_coefficient(network: TrafficNetwork) -> np.ndarray:
    """alpha / ((beta + 1) * capacity ** beta); 3 / (100 capacity^4) for the defaults."""
    return network.alpha / ((network.beta + 1) * network.capacity ** network.beta)


def beckmann_terms(network: TrafficNetwork, flows) -> np.ndarray:
    """Per-link integral of the BPR time from 0 to the link flow."""
    f = _check_flows(network, flows)
    return network.t0 * (f + beckmann_integral_coefficient(network) * f ** (network.beta + 1))


def beckmann_objective(network: TrafficNetwork, flows) -> float:
    """Sum over links of t0 * [f + alpha / ((beta + 1) cap^beta) * f^(beta + 1)]."""
    return float(np.sum(beckmann_terms(network, flows)))
