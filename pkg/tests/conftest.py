"""
Shared fixtures for the ising-traffic test suite
"""

import sys
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT))

from src.ising_core import IsingModel  # noqa: E402
from src.traffic import Link, Node, OdDemand, TrafficNetwork, grid_network  # noqa: E402

BUNDLED_GRID = REPO_ROOT / "networks" / "grid_5x5.net"
BUNDLED_GRID_BACKGROUND = REPO_ROOT / "networks" / "grid_5x5_background.net"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run tests marked slow (large instances)")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large instance, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def parallel_network(t0s, demand: float, capacity: float = 25.0, initial_flows=None) -> TrafficNetwork:
    """Links 1..k all running o -> d, one OD pair o -> d."""
    flows = initial_flows if initial_flows is not None else [0.0] * len(t0s)
    links = [Link(str(i + 1), "o", "d", float(t), capacity, initial_flow=float(f))
             for i, (t, f) in enumerate(zip(t0s, flows))]
    return TrafficNetwork([Node("o"), Node("d")], links, [OdDemand("o", "d", demand)])


def random_model(rng: np.random.Generator, n_spins: int, aux: bool = False) -> IsingModel:
    couplings = rng.normal(size=(n_spins, n_spins))
    couplings = np.triu(couplings, 1)
    couplings = couplings + couplings.T
    return IsingModel(couplings=couplings, offset=float(rng.normal()),
                      aux_index=n_spins - 1 if aux else None)


@pytest.fixture
def grid():
    return grid_network()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
