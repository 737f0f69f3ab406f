"""
maxcut subcommand: GFSNN-CIM vs SNN-CIM success rates
"""

import logging
from pathlib import Path
from typing import Dict, List, Sequence

from ..cim_solver import GFSNN, SolverParams, run_trial, write_trajectory_csv
from ..config import RunConfig
from ..maxcut import (
    WeightedGraph,
    brute_force_max_cut,
    compare_solvers,
    load_references,
    maxcut_to_ising,
    random_graph,
    read_rudy,
    write_results_csv,
)
from ..tap_compiler import write_report

logger = logging.getLogger(__name__)

RESULTS_FILE = "maxcut_results.csv"
REPORT_FILE = "maxcut_report.txt"
TRAJECTORY_SUFFIX = "_gfsnn_trajectory.csv"


def _instances(paths: Sequence[str], settings: RunConfig) -> Dict[str, WeightedGraph]:
    if paths:
        return {Path(p).stem: read_rudy(p) for p in paths}
    section = settings.maxcut
    name = f"{section.law}_{section.n_nodes}_{section.density:g}_s{section.instance_seed}"
    return {name: random_graph(section.law, section.n_nodes, section.density, section.instance_seed)}


def cmd_maxcut(paths: Sequence[str], settings: RunConfig) -> Path:
    """
    Compare both CIM variants on every instance with shared seeds.

    The reference cut comes from the references CSV, else from brute force
    when the oracle is enabled, else from the best cut either solver found.
    """
    section = settings.maxcut
    instances = _instances(paths, settings)
    references = load_references(section.reference_path) if section.reference_path else {}

    params_gf = SolverParams.from_dict(settings.solver.model_dump())
    params_snn = params_gf.without_feedback()
    trials, seed, threads = settings.batch.trials, settings.batch.seed, settings.batch.threads

    out_dir = Path(settings.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows: List[tuple] = []
    report = {"config_version": settings.config_version, "trials": trials, "seed": seed}

    for name, graph in instances.items():
        oracle_cut = None
        if section.oracle:
            _, oracle_cut = brute_force_max_cut(graph)
        if name in references:
            reference, source = references[name], "references"
        elif oracle_cut is not None:
            reference, source = oracle_cut, "brute_force"
        else:
            reference, source = None, "best_found"

        result = compare_solvers(graph, params_gf, params_snn, trials, reference, seed, threads)
        reference = result.reference_cut
        rows.append((name, result))

        report.update({
            f"{name}.nodes": graph.n_nodes,
            f"{name}.edges": len(graph.edges),
            f"{name}.reference_cut": reference,
            f"{name}.reference_source": source,
            f"{name}.gfsnn_success_rate": result.gf_rate,
            f"{name}.snn_success_rate": result.snn_rate,
            f"{name}.gfsnn_best_cut": result.gfsnn.best_cut,
            f"{name}.snn_best_cut": result.snn.best_cut,
            f"{name}.gfsnn_diverged": result.gfsnn.stats.n_diverged,
            f"{name}.snn_diverged": result.snn.stats.n_diverged,
        })
        if oracle_cut is not None:
            report[f"{name}.brute_force_cut"] = oracle_cut
        if settings.solver.trajectory_stride > 0:
            # Replays the best GFSNN-CIM seed; trials are deterministic per seed.
            replay = run_trial(maxcut_to_ising(graph), params_gf, result.gfsnn.stats.best.seed, GFSNN,
                               settings.solver.trajectory_stride)
            write_trajectory_csv(replay.trajectory, out_dir / f"{name}{TRAJECTORY_SUFFIX}")

    results_path = write_results_csv(rows, out_dir / RESULTS_FILE)
    write_report(report, out_dir / REPORT_FILE)
    for name, result in rows:
        print(f"{name}: GFSNN-CIM {result.gf_rate:.3f}, SNN-CIM {result.snn_rate:.3f} "
              f"(reference cut {result.reference_cut})")
    return results_path
