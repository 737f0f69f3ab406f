"""
CIM solver module
GFSNN-CIM / SNN-CIM oscillator dynamics, seeded trials and batch statistics
"""

from .params import BEST, FINAL, READOUTS, OscillatorState, SolverParams, Trajectory, TrialResult
from .dynamics import GFSNN, SNN, GfsnnCimDynamics, SnnCimDynamics, make_dynamics, step
from .runner import (
    BatchStats,
    initial_state,
    integrate,
    readout,
    run_batch,
    run_block,
    run_seeded_batch,
    run_seeded_blocks,
    run_trial,
)
from .trajectory import write_trajectory_csv
from .calibration import CalibrationPoint, Evaluator, grid_points, grid_search, write_calibration_csv

__all__ = [
    'BEST', 'FINAL', 'READOUTS', 'OscillatorState', 'SolverParams', 'Trajectory', 'TrialResult',
    'GFSNN', 'SNN', 'GfsnnCimDynamics', 'SnnCimDynamics', 'make_dynamics', 'step',
    'BatchStats', 'initial_state', 'integrate', 'readout', 'run_batch', 'run_block',
    'run_seeded_batch', 'run_seeded_blocks', 'run_trial', 'write_trajectory_csv',
    'CalibrationPoint', 'Evaluator', 'grid_points', 'grid_search', 'write_calibration_csv',
]
