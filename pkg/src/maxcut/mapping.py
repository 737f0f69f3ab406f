"""
Max-Cut <-> Ising mapping
With J_ij = -w_ij the energy is sum w s s, so 2 * cut + energy == W_total.
"""

from typing import Tuple

from ..ising_core import IsingModel, SpinConfig, brute_force_ground_state, validate_spins
from .graph import WeightedGraph


def cut_value(graph: WeightedGraph, spins: SpinConfig) -> int:
    """Total weight of edges whose endpoints carry opposite spins."""
    s = validate_spins(spins, graph.n_nodes)
    return sum(w for i, j, w in graph.edges if s[i] != s[j])


def maxcut_to_ising(graph: WeightedGraph) -> IsingModel:
    return IsingModel(couplings=-graph.weight_matrix(), offset=0.0)


def cut_from_energy(graph: WeightedGraph, energy_value: float) -> int:
    return int(round((graph.total_weight - energy_value) / 2.0))


def energy_for_cut(graph: WeightedGraph, cut: float) -> float:
    return float(graph.total_weight - 2 * cut)


def brute_force_max_cut(graph: WeightedGraph) -> Tuple[SpinConfig, int]:
    """Exact max cut of a small graph via the Ising ground state."""
    spins, ground = brute_force_ground_state(maxcut_to_ising(graph))
    return spins, cut_value(graph, spins)
