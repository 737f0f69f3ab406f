"""
tap subcommand: classical baselines and Ising solvers on one network
"""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from ..cim_solver import GFSNN, SolverParams
from ..config import RunConfig
from ..errors import InputError
from ..ising_core import write_ising_dump
from ..tap_baselines import dia_batch, frank_wolfe, round_flows, write_fw_log
from ..tap_compiler import (
    SOLVERS,
    StepOutcome,
    build_plan,
    choose_lambda,
    compile_refit,
    compile_tap,
    group_route_sets,
    make_solver,
    shared_fits,
    solve_compiled,
    write_report,
)
from ..traffic import (
    TrafficNetwork,
    beckmann_objective,
    generate_route_sets,
    read_network,
    write_flow_csv,
    write_heatmap_csv,
)

logger = logging.getLogger(__name__)

KNOWN_SOLVERS = ("fw", "dia") + SOLVERS
REPORT_FILE = "tap_report.txt"
COMPARISON_FILE = "tap_comparison.csv"
COMPARISON_HEADER = ["solver", "true_objective", "approx_objective", "feasibility_rate",
                     "deviation_from_fw_percent", "deviation_from_fw_rounded_percent"]


def _record_outcome(report: Dict[str, Any], prefix: str, outcome: StepOutcome):
    best = outcome.best
    report[f"{prefix}.true_objective"] = best.true_objective
    report[f"{prefix}.approx_objective"] = best.approx_objective
    report[f"{prefix}.feasibility_rate"] = outcome.feasibility_rate
    report[f"{prefix}.best_seed"] = best.seed
    report[f"{prefix}.lambda"] = outcome.compiled.lam
    report[f"{prefix}.bound_violations"] = outcome.bound_violations
    report[f"{prefix}.diverged"] = outcome.n_diverged


def _deviation_percent(value: float, reference: Optional[float]) -> str:
    if reference is None or reference == 0.0:
        return ""
    return repr(100.0 * (float(value) - reference) / reference)


def _write_comparison(rows, fw_objective: Optional[float], fw_rounded: Optional[float], path: Path) -> Path:
    """One row per solver; deviations against continuous FW and against FW rounded to whole groups."""
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(COMPARISON_HEADER)
        for name, true, approx, rate in rows:
            writer.writerow([name, repr(float(true)), "" if approx is None else repr(float(approx)),
                             "" if rate is None else repr(float(rate)),
                             _deviation_percent(true, fw_objective), _deviation_percent(true, fw_rounded)])
    return path


def tap_solver_params(settings: RunConfig) -> SolverParams:
    """Solver section with the TAP feedback override applied."""
    values = settings.solver.model_dump()
    if settings.tap.zeta is not None:
        values["zeta"] = settings.tap.zeta
    return SolverParams.from_dict(values)


def prepare_instance(network: TrafficNetwork, network_path: str, settings: RunConfig, threads: Optional[int]):
    """
    Group plan, DIA-aligned route sets, shared fits and the step-1 compiled model.

    Raises:
        InputError: the network carries no OD demand
    """
    tap = settings.tap
    plan = build_plan(network, tap.group_size, tap.routes_per_group)
    if plan.n_groups == 0:
        raise InputError(f"{network_path} has no OD demand to assign")
    dia_results = dia_batch(network, tap.group_size, tap.dia_trials, settings.batch.seed, threads)
    od_sets = generate_route_sets(network, dia_results.best, tap.routes_per_group, tap.yen_k,
                                  tap.detour_max_overlap)
    route_sets = group_route_sets(plan, od_sets)

    fits = shared_fits(network, plan, route_sets, tap.min_width_groups, settings.fit.samples)
    lam = tap.lambda_override if tap.lambda_override is not None else \
        choose_lambda(network, plan, route_sets, fits)
    compiled = compile_tap(network, plan, route_sets, fits, lam)
    return plan, route_sets, fits, compiled, dia_results


def cmd_tap(network_path: str, settings: RunConfig) -> Dict[str, Any]:
    """
    Run the requested solvers on aligned route sets and write flows, heat maps and the report.

    Returns:
        The report entries
    """
    tap = settings.tap
    unknown = [s for s in tap.solvers if s not in KNOWN_SOLVERS]
    if unknown or not tap.solvers:
        raise InputError(f"Unknown solvers {unknown}; choose from {','.join(KNOWN_SOLVERS)}")
    trials, seed, threads = settings.batch.trials, settings.batch.seed, settings.batch.threads
    out_dir = Path(settings.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    network = read_network(network_path)
    plan, route_sets, fits, compiled, dia_results = prepare_instance(network, network_path, settings, threads)
    lam = compiled.lam
    shared = next(iter(fits.values()))

    report: Dict[str, Any] = {
        "config_version": settings.config_version,
        "network": network_path,
        "nodes": len(network.nodes),
        "links": network.n_links,
        "od_pairs": len(network.od_pairs),
        "total_demand": network.total_demand,
        "group_size": tap.group_size,
        "groups": plan.n_groups,
        "routes_per_group": tap.routes_per_group,
        "spins": compiled.n_spins,
        "lambda": lam,
        "shared_fit.gamma": (shared.gamma1, shared.gamma2, shared.gamma3),
        "shared_fit.interval": shared.fit_interval,
        "seed": seed,
        "trials": trials,
        "two_step": tap.two_step,
    }
    if tap.dump_model:
        write_ising_dump(compiled.model, out_dir / "model.ising")

    flows: Dict[str, np.ndarray] = {}
    comparison = []
    fw_objective = fw_rounded = None
    chosen_routes: Dict[str, list] = {}

    if "fw" in tap.solvers:
        fw = frank_wolfe(network, tap.fw_max_iters, tap.fw_gap_tol)
        write_fw_log(fw, out_dir / "fw_convergence.csv")
        fw_objective = fw.objective
        flows["fw"] = fw.link_flows
        fw_rounded = beckmann_objective(network, round_flows(network, fw.link_flows, tap.group_size))
        report.update({"fw.objective": fw.objective, "fw.iterations": fw.iterations,
                       "fw.relative_gap": fw.relative_gap, "fw.rounded_objective": fw_rounded})
        comparison.append(("fw", fw.objective, None, None))

    if "dia" in tap.solvers:
        best = dia_results.best
        flows["dia"] = best.link_flows
        objectives = dia_results.objectives
        report.update({"dia.objective": best.objective, "dia.best_seed": best.order_seed,
                       "dia.mean_objective": float(objectives.mean()),
                       "dia.worst_objective": float(objectives.max())})
        comparison.append(("dia", best.objective, None, None))
        chosen_routes["dia"] = [best.group_routes[key] for key in plan.groups]

    params = tap_solver_params(settings)
    anneal = settings.anneal.model_dump()
    requested = [name for name in SOLVERS if name in tap.solvers]
    if GFSNN in requested:
        report[f"{GFSNN}.zeta"] = params.zeta
    target, suffix = compiled, ""
    if tap.two_step and requested:
        # Every solver shares the step-2 model refitted around the GFSNN-CIM prediction.
        step1 = solve_compiled(compiled, make_solver(GFSNN, params, anneal, threads), trials, seed)
        _record_outcome(report, f"{GFSNN}.step1", step1)
        target = compile_refit(network, plan, route_sets, step1.best.link_flows, tap.lambda_override,
                               tap.min_width_groups, settings.fit.samples)
        suffix = ".step2"
        report["step2.lambda"] = target.lam
        if tap.dump_model:
            write_ising_dump(target.model, out_dir / "model_step2.ising")

    for name in requested:
        outcome = solve_compiled(target, make_solver(name, params, anneal, threads), trials, seed)
        _record_outcome(report, f"{name}{suffix}", outcome)
        flows[name] = outcome.best.link_flows
        comparison.append((name, outcome.best.true_objective, outcome.best.approx_objective,
                           outcome.feasibility_rate))
        chosen_routes[name] = [route_sets[i][j] for i, j in enumerate(outcome.best.group_routes)]

    has_coordinates = all(node.has_coordinates for node in network.nodes)
    for name, link_flows in flows.items():
        write_flow_csv(network, link_flows, out_dir / f"flows_{name}.csv")
        if has_coordinates:
            write_heatmap_csv(network, link_flows, out_dir / f"heatmap_{name}.csv")
    if not has_coordinates:
        logger.info("Network has no node coordinates; heat maps skipped")

    if tap.case_group is not None:
        if not 0 <= tap.case_group < plan.n_groups:
            raise InputError(f"case_group {tap.case_group} out of range for {plan.n_groups} groups")
        report["case_group"] = plan.groups[tap.case_group]
        for name, routes in chosen_routes.items():
            report[f"case_group.{name}"] = "-".join(network.route_link_ids(routes[tap.case_group]))

    _write_comparison(comparison, fw_objective, fw_rounded, out_dir / COMPARISON_FILE)
    write_report(report, out_dir / REPORT_FILE)
    print(f"{'solver':<8} {'true objective':>18}")
    for name, true, _, _ in comparison:
        print(f"{name:<8} {true:>18.6f}")
    print(f"spins={compiled.n_spins} lambda={lam:.6g}")
    return report
