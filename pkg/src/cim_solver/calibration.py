"""
Grid search over oscillator parameters

Each grid point replaces fields of a base SolverParams and is scored by named
evaluators returning rates in [0, 1]. The score of a point is the mean of all
its rates; points come back best first, ties in grid order.
"""

import csv
import itertools
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Sequence, Union

import numpy as np

from ..errors import InputError
from .params import SolverParams

logger = logging.getLogger(__name__)

Evaluator = Callable[[SolverParams], Dict[str, float]]

FIXED_FIELDS = ("gain_ramp", "readout")


@dataclass
class CalibrationPoint:
    values: Dict[str, float]
    metrics: Dict[str, float]

    @property
    def score(self) -> float:
        return float(np.mean(list(self.metrics.values()))) if self.metrics else 0.0


def grid_points(grid: Mapping[str, Sequence[float]]) -> List[Dict[str, float]]:
    """Cartesian product of the grid, last key varying fastest."""
    tunable = {f.name for f in fields(SolverParams)} - set(FIXED_FIELDS)
    unknown = sorted(set(grid) - tunable)
    if unknown:
        raise InputError(f"Cannot tune {unknown}; tunable parameters are {sorted(tunable)}")
    empty = [name for name, values in grid.items() if len(values) == 0]
    if empty:
        raise InputError(f"Grid axes without values: {empty}")
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


def grid_search(grid: Mapping[str, Sequence[float]], base: SolverParams,
                evaluators: Mapping[str, Evaluator]) -> List[CalibrationPoint]:
    """
    Score every grid point with every evaluator.

    Args:
        grid: Parameter name -> candidate values
        base: Parameters the grid points start from
        evaluators: Name -> callable mapping SolverParams to named rates

    Returns:
        CalibrationPoints ordered by descending score
    """
    if not evaluators:
        raise InputError("Grid search needs at least one evaluator")
    points = []
    candidates = grid_points(grid)
    for index, values in enumerate(candidates, start=1):
        params = replace(base, **values)
        metrics = {}
        for name, evaluate in evaluators.items():
            for key, rate in evaluate(params).items():
                metrics[f"{name}.{key}"] = float(rate)
        point = CalibrationPoint(values=dict(values), metrics=metrics)
        logger.info(f"Grid point {index}/{len(candidates)} {values}: score {point.score:.3f}")
        points.append(point)
    return sorted(points, key=lambda p: -p.score)


def write_calibration_csv(points: Sequence[CalibrationPoint], path: Union[str, Path]) -> Path:
    """One row per grid point: parameter values, every rate, then the score."""
    path = Path(path)
    names = list(points[0].values) if points else []
    metrics = list(points[0].metrics) if points else []
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names + metrics + ["score"])
        for point in points:
            writer.writerow([point.values[n] for n in names]
                            + [f"{point.metrics[m]:.6g}" for m in metrics]
                            + [f"{point.score:.6g}"])
    logger.info(f"Wrote {len(points)} calibration rows to {path}")
    return path
