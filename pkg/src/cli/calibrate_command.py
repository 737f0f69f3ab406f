"""
calibrate subcommand: grid search of the oscillator parameters
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from ..cim_solver import (
    CalibrationPoint,
    Evaluator,
    SolverParams,
    grid_points,
    grid_search,
    write_calibration_csv,
)
from ..config import RunConfig
from ..maxcut import WeightedGraph, random_graph, success_rate_evaluator
from ..tap_baselines import frank_wolfe
from ..tap_compiler import feasibility_evaluator
from ..traffic import read_network
from .tap_command import prepare_instance

logger = logging.getLogger(__name__)

CALIBRATION_FILE = "calibration.csv"


def cmd_calibrate(network_path: Optional[str], settings: RunConfig) -> List[CalibrationPoint]:
    """
    Score every grid point on brute-forced Max-Cut instances and, when enabled,
    on the TAP network; write the ranked table and print the best point.

    Returns:
        Grid points, best first
    """
    section = settings.calibrate
    grid_points(section.grid)
    seed, threads = settings.batch.seed, settings.batch.threads
    out_dir = Path(settings.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    instances: Dict[str, List[WeightedGraph]] = {
        law: [random_graph(law, settings.maxcut.n_nodes, settings.maxcut.density,
                           section.first_instance_seed + i)
              for i in range(section.instances_per_law)]
        for law in section.laws
    }
    evaluators: Dict[str, Evaluator] = {
        "maxcut": success_rate_evaluator(instances, section.trials, seed, threads),
    }
    if section.tap and network_path is not None:
        network = read_network(network_path)
        _, _, _, compiled, _ = prepare_instance(network, network_path, settings, threads)
        reference = frank_wolfe(network, settings.tap.fw_max_iters, settings.tap.fw_gap_tol).objective
        evaluators["tap"] = feasibility_evaluator(compiled, section.tap_trials, seed, reference,
                                                  section.tolerance, threads)
        logger.info(f"Scoring TAP feasibility on {network_path} ({compiled.n_spins} spins)")

    base = SolverParams.from_dict(settings.solver.model_dump())
    points = grid_search(section.grid, base, evaluators)
    write_calibration_csv(points, out_dir / CALIBRATION_FILE)
    best = points[0]
    print(f"best {best.values}: score {best.score:.3f}")
    return points
