"""
Trajectory CSV export
"""

import csv
import logging
from pathlib import Path
from typing import Union

from .params import Trajectory

logger = logging.getLogger(__name__)


def write_trajectory_csv(trajectory: Trajectory, path: Union[str, Path]) -> Path:
    """Write header t,x_0,...,x_{N-1} followed by one row per sample."""
    path = Path(path)
    n_spins = trajectory.x[0].shape[0] if trajectory.x else 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t"] + [f"x_{i}" for i in range(n_spins)])
        for t, x in zip(trajectory.times, trajectory.x):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in x])
    logger.info(f"Wrote {len(trajectory.times)} trajectory samples to {path}")
    return path
