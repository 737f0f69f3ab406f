"""
Ising core module
Canonical Ising/QUBO representations, energies and the exhaustive oracle
"""

from .model import (
    IsingModel,
    QuboQuadratic,
    SpinConfig,
    bits_to_spins,
    canonical_gauge,
    energies,
    energy,
    qubo_to_ising,
    spins_to_bits,
    validate_spins,
)
from .oracle import DEFAULT_MAX_SPINS, brute_force_ground_state
from .dump import format_ising_dump, parse_ising_dump, read_ising_dump, write_ising_dump

__all__ = [
    'IsingModel', 'QuboQuadratic', 'SpinConfig', 'bits_to_spins', 'canonical_gauge',
    'energies', 'energy', 'qubo_to_ising', 'spins_to_bits', 'validate_spins',
    'DEFAULT_MAX_SPINS', 'brute_force_ground_state',
    'format_ising_dump', 'parse_ising_dump', 'read_ising_dump', 'write_ising_dump',
]
