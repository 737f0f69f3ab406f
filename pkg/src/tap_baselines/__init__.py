"""
TAP baselines module
Frank-Wolfe equilibrium, incremental assignment and simulated annealing
"""

from .frank_wolfe import FwResult, all_or_nothing, frank_wolfe, round_flows, write_fw_log
from .dia import DiaBatch, DiaResult, demand_groups, dia, dia_batch
from .annealing import SA, AnnealSchedule, anneal_batch, simulated_annealing

__all__ = [
    'FwResult', 'all_or_nothing', 'frank_wolfe', 'round_flows', 'write_fw_log',
    'DiaBatch', 'DiaResult', 'demand_groups', 'dia', 'dia_batch',
    'SA', 'AnnealSchedule', 'anneal_batch', 'simulated_annealing',
]
