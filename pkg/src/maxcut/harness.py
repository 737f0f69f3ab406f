"""
GFSNN-CIM vs SNN-CIM success-rate comparison on Max-Cut instances
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Union

from ..cim_solver import GFSNN, SNN, BatchStats, SolverParams, run_batch
from ..errors import ParseError
from .graph import WeightedGraph
from .mapping import brute_force_max_cut, cut_value, energy_for_cut, maxcut_to_ising

logger = logging.getLogger(__name__)

RESULTS_HEADER = ["instance", "solver", "trials", "success_rate", "best_cut", "reference_cut"]


@dataclass
class SolverOutcome:
    solver: str
    trials: int
    success_rate: float
    best_cut: int
    stats: BatchStats


@dataclass
class ComparisonResult:
    reference_cut: int
    gfsnn: SolverOutcome
    snn: SolverOutcome

    @property
    def gf_rate(self) -> float:
        return self.gfsnn.success_rate

    @property
    def snn_rate(self) -> float:
        return self.snn.success_rate


def _outcome(graph: WeightedGraph, stats: BatchStats, solver: str) -> SolverOutcome:
    return SolverOutcome(solver=solver, trials=stats.n_trials,
                         success_rate=float(stats.success_rate),
                         best_cut=cut_value(graph, stats.best.spins), stats=stats)


def compare_solvers(graph: WeightedGraph, params_gf: SolverParams, params_snn: SolverParams,
                    n_trials: int, reference_cut: Optional[int] = None, base_seed: int = 0,
                    max_workers: Optional[int] = None) -> ComparisonResult:
    """
    Run GFSNN-CIM and SNN-CIM over the same seed range.

    A trial succeeds when its cut reaches reference_cut, i.e. when its energy
    is at most W_total - 2 * reference_cut.

    Args:
        graph: Max-Cut instance
        params_gf: Parameters of the feedback variant
        params_snn: Parameters of the feedback-free variant
        n_trials: Trials per solver
        reference_cut: Known optimum (dataset value or brute force); the best
            cut either solver finds when None
        base_seed: First seed of the shared range

    Returns:
        ComparisonResult with per-solver success rates and best cuts
    """
    model = maxcut_to_ising(graph)
    gf_stats = run_batch(model, params_gf, n_trials, base_seed, variant=GFSNN,
                         max_workers=max_workers)
    snn_stats = run_batch(model, params_snn, n_trials, base_seed, variant=SNN,
                          max_workers=max_workers)
    if reference_cut is None:
        reference_cut = max(cut_value(graph, gf_stats.best.spins), cut_value(graph, snn_stats.best.spins))
    gf_stats.reference_energy = energy_for_cut(graph, reference_cut)
    snn_stats.reference_energy = gf_stats.reference_energy
    result = ComparisonResult(reference_cut=int(reference_cut),
                              gfsnn=_outcome(graph, gf_stats, GFSNN),
                              snn=_outcome(graph, snn_stats, SNN))
    logger.info(f"Success rates vs cut {reference_cut}: GFSNN-CIM {result.gf_rate:.3f}, "
                f"SNN-CIM {result.snn_rate:.3f} over {n_trials} trials")
    return result


def success_rate_evaluator(instances: Mapping[str, Sequence[WeightedGraph]], n_trials: int,
                           base_seed: int = 0, max_workers: Optional[int] = None
                           ) -> Callable[[SolverParams], Dict[str, float]]:
    """
    Mean success rates of both variants per instance family, against brute-force optima.

    The optima are computed once; the returned callable runs the comparison
    for one parameter set and yields "<family>.gfsnn" and "<family>.snn".
    """
    references = {family: [brute_force_max_cut(graph)[1] for graph in graphs]
                  for family, graphs in instances.items()}

    def evaluate(params: SolverParams) -> Dict[str, float]:
        rates = {}
        for family, graphs in instances.items():
            results = [compare_solvers(graph, params, params.without_feedback(), n_trials, reference,
                                       base_seed, max_workers)
                       for graph, reference in zip(graphs, references[family])]
            rates[f"{family}.gfsnn"] = sum(r.gf_rate for r in results) / len(results)
            rates[f"{family}.snn"] = sum(r.snn_rate for r in results) / len(results)
        return rates

    return evaluate


def load_references(path: Union[str, Path]) -> Dict[str, int]:
    """Read a sidecar CSV 'instance,reference_cut'."""
    path = Path(path)
    references = {}
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        for line_number, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#") or row[0] == "instance":
                continue
            try:
                references[row[0].strip()] = int(row[1])
            except (IndexError, ValueError):
                raise ParseError(f"expected 'instance,reference_cut', got {row}",
                                 line_number=line_number, path=str(path))
    return references


def write_references(references: Dict[str, int], path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["instance", "reference_cut"])
        for name in sorted(references):
            writer.writerow([name, references[name]])
    return path


def write_results_csv(rows: Iterable[tuple], path: Union[str, Path]) -> Path:
    """Write (instance, ComparisonResult) pairs as the comparison table."""
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(RESULTS_HEADER)
        for instance, result in rows:
            for outcome in (result.gfsnn, result.snn):
                writer.writerow([instance, outcome.solver, outcome.trials,
                                 f"{outcome.success_rate:.6f}", outcome.best_cut,
                                 result.reference_cut])
    logger.info(f"Wrote comparison table to {path}")
    return path
