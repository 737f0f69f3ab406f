"""
fit, oracle and gen subcommands
"""

import logging
from pathlib import Path
from typing import Tuple

from ..config import RunConfig
from ..errors import InputError
from ..ising_core import brute_force_ground_state, read_ising_dump
from ..maxcut import random_graph, write_rudy
from ..tap_compiler import QuadraticFit, fit_quadratic, fit_table
from ..traffic import (
    GRID_COMMENTS,
    beijing_scale_network,
    grid_network,
    read_network,
    synthetic_initial_flows,
    write_network,
)

logger = logging.getLogger(__name__)


def cmd_fit(network_path: str, link_id: str, interval: Tuple[float, float],
            settings: RunConfig) -> QuadraticFit:
    """Print the quadratic fit of one link and a sampled comparison table."""
    network = read_network(network_path)
    if link_id not in network.link_index:
        raise InputError(f"Unknown link id '{link_id}' in {network_path}")
    link = network.links[network.link_index[link_id]]
    fit = fit_quadratic(link, interval, settings.fit.samples)

    print(f"link={link.id}")
    print(f"interval={fit.fit_interval[0]!r},{fit.fit_interval[1]!r}")
    print(f"gamma1={fit.gamma1!r}")
    print(f"gamma2={fit.gamma2!r}")
    print(f"gamma3={fit.gamma3!r}")
    print(f"max_rel_error={fit.max_rel_error!r}")
    print(f"max_abs_error={fit.max_abs_error!r}")
    print(f"{'flow':>14} {'exact':>16} {'approx':>16} {'rel_error':>12}")
    for flow, exact, approx, relative in fit_table(fit, link, settings.fit.table_rows):
        print(f"{flow:>14.6g} {exact:>16.9g} {approx:>16.9g} {relative:>12.3e}")
    return fit


def cmd_oracle(model_path: str, max_spins: int = 24):
    """Print the exhaustive ground state of a dumped model."""
    model = read_ising_dump(model_path)
    spins, ground = brute_force_ground_state(model, max_spins)
    print(f"spins={model.n_spins}")
    print(f"ground_energy={ground!r}")
    print("ground_state=" + ",".join(str(int(s)) for s in spins))
    return spins, ground


def cmd_gen(kind: str, output: str, settings: RunConfig) -> Path:
    """Write a generated Max-Cut instance or network."""
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    seed = settings.batch.seed
    if kind == "maxcut":
        section = settings.maxcut
        write_rudy(random_graph(section.law, section.n_nodes, section.density, section.instance_seed), path)
    elif kind == "grid":
        write_network(grid_network(), path, GRID_COMMENTS)
    elif kind == "grid-synthetic":
        grid = grid_network()
        write_network(grid.with_initial_flows(synthetic_initial_flows(grid, seed)), path)
    elif kind == "beijing":
        write_network(beijing_scale_network(seed), path)
    else:
        raise InputError(f"Unknown generator '{kind}'")
    logger.info(f"Wrote {kind} instance to {path}")
    return path
