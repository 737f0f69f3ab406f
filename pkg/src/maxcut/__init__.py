"""
Max-Cut module
rudy I/O, weight-law generators, Ising mapping and the solver comparison harness
"""

from .graph import WEIGHT_LAWS, WeightedGraph, format_rudy, parse_rudy, random_graph, read_rudy, write_rudy
from .mapping import brute_force_max_cut, cut_from_energy, cut_value, energy_for_cut, maxcut_to_ising
from .harness import (
    ComparisonResult,
    SolverOutcome,
    compare_solvers,
    load_references,
    success_rate_evaluator,
    write_references,
    write_results_csv,
)

__all__ = [
    'WEIGHT_LAWS', 'WeightedGraph', 'format_rudy', 'parse_rudy', 'random_graph', 'read_rudy',
    'write_rudy', 'brute_force_max_cut', 'cut_from_energy', 'cut_value', 'energy_for_cut',
    'maxcut_to_ising', 'ComparisonResult', 'SolverOutcome', 'compare_solvers',
    'load_references', 'success_rate_evaluator', 'write_references', 'write_results_csv',
]
