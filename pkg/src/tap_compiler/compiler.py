"""
Traffic assignment to QUBO / Ising compilation and decoding

Binary variable q_v selects route j of group i (v runs over groups, then
routes). Link flows are affine in q: f = f0 + A q. Every link used by some
route contributes t0 * (gamma1 f^2 + gamma2 f + gamma3); links no route uses
keep their exact Beckmann term as a constant. Each group adds the one-hot
penalty lambda * (sum_j q_ij - 1)^2.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import CompileError, InputError
from ..ising_core import IsingModel, QuboQuadratic, canonical_gauge, qubo_to_ising, spins_to_bits, validate_spins
from ..traffic import Route, TrafficNetwork, beckmann_terms
from .discretization import DiscretizationPlan, incidence_matrix, reachable_extra_flow, variable_offsets
from .fitting import QuadraticFit

logger = logging.getLogger(__name__)

MIN_LAMBDA = 1e-6


@dataclass
class CompiledTap:
    """
    A compiled instance.

    Attributes:
        network: Source network
        plan: Vehicle groups
        route_sets: Routes of every group
        fits: Quadratic fit of every link some route uses, keyed by link id
        qubo: Objective plus penalty over the binary variables
        model: qubo_to_ising(qubo), auxiliary spin last
        lam: One-hot penalty coefficient
        incidence: Flow map A
        offsets: First variable of each group (last entry = variable count)
        traversed: Mask of links some route uses
    """
    network: TrafficNetwork
    plan: DiscretizationPlan
    route_sets: List[List[Route]]
    fits: Dict[str, QuadraticFit]
    qubo: QuboQuadratic
    model: IsingModel
    lam: float
    incidence: np.ndarray
    offsets: np.ndarray
    traversed: np.ndarray

    @property
    def n_spins(self) -> int:
        return self.model.n_spins

    @property
    def n_vars(self) -> int:
        return int(self.offsets[-1])

    def variable(self, group: int, route: int) -> int:
        return int(self.offsets[group] + route)

    def fit_arrays(self):
        """(gamma1, gamma2, gamma3, max_abs_error) per link; zeros on untraversed links."""
        arrays = np.zeros((4, self.network.n_links))
        for a in np.flatnonzero(self.traversed):
            fit = self.fits[self.network.links[a].id]
            arrays[:, a] = (fit.gamma1, fit.gamma2, fit.gamma3, fit.max_abs_error)
        return arrays


@dataclass
class DecodedSolution:
    """
    Solver output mapped back to routes.

    Infeasible configurations keep feasible=False and carry no flows.
    """
    feasible: bool
    bits: np.ndarray
    group_routes: List[Optional[int]]
    link_flows: Optional[np.ndarray] = None
    true_objective: Optional[float] = None
    approx_objective: Optional[float] = None
    approximation_bound: Optional[float] = None
    seed: Optional[int] = None

    @property
    def relative_deviation(self) -> Optional[float]:
        """|true - approx| / true."""
        if not self.feasible:
            return None
        return abs(self.true_objective - self.approx_objective) / self.true_objective

    @property
    def within_bound(self) -> Optional[bool]:
        if not self.feasible:
            return None
        return self.relative_deviation <= self.approximation_bound * (1 + 1e-9) + 1e-12


def _validate_fits(network: TrafficNetwork, fits: Dict[str, QuadraticFit], traversed: np.ndarray,
                   extra: np.ndarray):
    for a in np.flatnonzero(traversed):
        link = network.links[a]
        low, high = link.initial_flow, link.initial_flow + extra[a]
        fit = fits.get(link.id)
        if fit is None:
            raise CompileError(f"No quadratic fit for link {link.id}", link_id=link.id)
        if not fit.covers(low, high):
            raise CompileError(
                f"Fit interval [{fit.fit_interval[0]:g}, {fit.fit_interval[1]:g}] of link {link.id} "
                f"does not cover its feasible flow range [{low:g}, {high:g}]",
                link_id=link.id,
            )


def compile_tap(network: TrafficNetwork, plan: DiscretizationPlan,
                route_sets: Sequence[Sequence[Route]], fits: Dict[str, QuadraticFit],
                lam: float) -> CompiledTap:
    """
    Build the QUBO X, Y, C and its Ising model.

    Args:
        network: Network with background flows
        plan: Vehicle groups
        route_sets: Distinct routes per group, aligned with plan.groups
        fits: Fit per link id; each traversed link's fit must cover
            [f0, f0 + sizes of the groups whose route set uses the link]
        lam: One-hot penalty coefficient (>= 0)

    Returns:
        CompiledTap

    Raises:
        CompileError: a traversed link has no fit or its interval is too narrow
    """
    if lam < 0:
        raise InputError(f"Penalty coefficient must be non-negative, got {lam}")
    route_sets = [list(routes) for routes in route_sets]
    incidence = incidence_matrix(network, plan, route_sets)
    offsets = variable_offsets(route_sets)
    traversed = incidence.any(axis=1)
    _, extra = reachable_extra_flow(network, plan, route_sets)
    _validate_fits(network, fits, traversed, extra)

    f0 = network.initial_flows
    rows = np.flatnonzero(traversed)
    gamma = np.array([[fits[network.links[a].id].gamma1, fits[network.links[a].id].gamma2,
                       fits[network.links[a].id].gamma3] for a in rows]).reshape(-1, 3)
    t0 = network.t0[rows]
    used = incidence[rows]

    quad = (used * (t0 * gamma[:, 0])[:, None]).T @ used
    linear = ((t0 * (2.0 * gamma[:, 0] * f0[rows] + gamma[:, 1]))[:, None] * used).sum(axis=0)
    constant = float(np.sum(t0 * (gamma[:, 0] * f0[rows] ** 2 + gamma[:, 1] * f0[rows] + gamma[:, 2])))
    constant += float(np.sum(beckmann_terms(network, f0)[~traversed]))

    for i in range(plan.n_groups):
        block = slice(offsets[i], offsets[i + 1])
        quad[block, block] += lam
        linear[block] -= 2.0 * lam
        constant += lam

    qubo = QuboQuadratic(quad=0.5 * (quad + quad.T), linear=linear,
                         constant=constant)
    model = qubo_to_ising(qubo)
    compiled = CompiledTap(network=network, plan=plan, route_sets=route_sets,
                           fits={network.links[a].id: fits[network.links[a].id] for a in rows},
                           qubo=qubo, model=model, lam=float(lam), incidence=incidence,
                           offsets=offsets, traversed=traversed)
    logger.info(f"Compiled {plan.n_groups} groups over {len(rows)} links into {model.n_spins} spins "
                f"(lambda={lam:.6g})")
    return compiled


def choose_lambda(network: TrafficNetwork, plan: DiscretizationPlan,
                  route_sets: Sequence[Sequence[Route]], fits: Dict[str, QuadraticFit]) -> float:
    """
    Penalty coefficient twice the largest objective change of a single bit flip.

    The change on link a when a group of size s enters or leaves is bounded
    by t0 * s * (gamma1 * (2 f_max + s) + |gamma2|), f_max being the flow with
    every variable on. Any one-hot violation then costs more than the best
    objective gain of repairing it.
    """
    incidence = incidence_matrix(network, plan, [list(r) for r in route_sets])
    traversed = incidence.any(axis=1)
    f_max = network.initial_flows + incidence.sum(axis=1)

    per_link = np.zeros((network.n_links, incidence.shape[1]))
    for a in np.flatnonzero(traversed):
        fit = fits[network.links[a].id]
        size = incidence[a]
        per_link[a] = network.t0[a] * size * (fit.gamma1 * (2.0 * f_max[a] + size) + abs(fit.gamma2))
    bound = float(per_link.sum(axis=0).max()) if per_link.size else 0.0
    lam = max(2.0 * bound, MIN_LAMBDA)
    logger.info(f"Chose lambda={lam:.6g} from single-flip bound {bound:.6g}")
    return lam


def flows_from_choice(compiled: CompiledTap, bits: np.ndarray) -> np.ndarray:
    return compiled.network.initial_flows + compiled.incidence @ np.asarray(bits, dtype=float)


def approx_objective(compiled: CompiledTap, flows: np.ndarray) -> float:
    """Fitted objective on traversed links plus exact terms elsewhere."""
    network = compiled.network
    gamma1, gamma2, gamma3, _ = compiled.fit_arrays()
    mask = compiled.traversed
    fitted = network.t0 * (gamma1 * flows ** 2 + gamma2 * flows + gamma3)
    return float(np.sum(fitted[mask]) + np.sum(beckmann_terms(network, flows)[~mask]))


def decode(compiled: CompiledTap, spins) -> DecodedSolution:
    """
    Map spins to route choices, flows and objectives.

    Infeasible configurations (a group with zero or several selected routes)
    are labelled, never repaired.
    """
    model = compiled.model
    spins = validate_spins(spins, model.n_spins)
    spins = canonical_gauge(spins, model.aux_index)
    bits = spins_to_bits(np.delete(spins, model.aux_index))

    choices: List[Optional[int]] = []
    for i in range(compiled.plan.n_groups):
        selected = np.flatnonzero(bits[compiled.offsets[i]:compiled.offsets[i + 1]])
        choices.append(int(selected[0]) if len(selected) == 1 else None)
    if any(choice is None for choice in choices):
        return DecodedSolution(feasible=False, bits=bits, group_routes=choices)

    flows = flows_from_choice(compiled, bits)
    true = float(np.sum(beckmann_terms(compiled.network, flows)))
    approx = approx_objective(compiled, flows)
    _, _, _, max_abs = compiled.fit_arrays()
    bound = float(np.sum(compiled.network.t0 * max_abs) / true) if true > 0 else 0.0
    return DecodedSolution(feasible=True, bits=bits, group_routes=choices, link_flows=flows,
                           true_objective=true, approx_objective=approx, approximation_bound=bound)
