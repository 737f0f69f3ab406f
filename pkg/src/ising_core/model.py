"""
Ising and QUBO representations
Energy evaluation, binary/spin conversion and the auxiliary-spin linearization
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InputError

logger = logging.getLogger(__name__)

# Spin configurations are int8 vectors with entries in {+1, -1}.
SpinConfig = np.ndarray

SYMMETRY_TOL = 1e-12


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class IsingModel:
    """
    Ising model with energy E(s) = offset - sum_{i<j} J_ij s_i s_j.

    Every solver in the package minimizes this energy. Producers (Max-Cut
    mapper, traffic compiler) place signs so that lower energy means a better
    objective.
    """
    couplings: np.ndarray
    offset: float = 0.0
    aux_index: Optional[int] = None
    n_spins: int = field(init=False)

    def __post_init__(self):
        couplings = np.array(self.couplings, dtype=float)
        if couplings.ndim != 2 or couplings.shape[0] != couplings.shape[1]:
            raise InputError(f"Couplings must be a square matrix, got shape {couplings.shape}")
        if couplings.shape[0] == 0:
            raise InputError("An Ising model needs at least one spin")
        if not np.all(np.isfinite(couplings)):
            raise InputError("Couplings must be finite")
        if np.any(np.diag(couplings) != 0.0):
            raise InputError("Couplings must have a zero diagonal")
        if not np.allclose(couplings, couplings.T, rtol=0.0, atol=SYMMETRY_TOL):
            raise InputError("Couplings must be symmetric")
        if not np.isfinite(self.offset):
            raise InputError("Offset must be finite")
        n_spins = couplings.shape[0]
        if self.aux_index is not None and not 0 <= self.aux_index < n_spins:
            raise InputError(f"aux_index {self.aux_index} out of range for {n_spins} spins")

        object.__setattr__(self, "couplings", _readonly(couplings))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "n_spins", n_spins)

    @property
    def max_abs_coupling(self) -> float:
        return float(np.max(np.abs(self.couplings)))

    def __repr__(self) -> str:
        n_edges = int(np.count_nonzero(np.triu(self.couplings, 1)))
        return (f"IsingModel(n_spins={self.n_spins}, couplings={n_edges}, "
                f"offset={self.offset:.6g}, aux_index={self.aux_index})")


@dataclass(frozen=True)
class QuboQuadratic:
    """Binary quadratic q^T X q + Y^T q + C over q in {0,1}^n."""
    quad: np.ndarray
    linear: np.ndarray
    constant: float = 0.0
    n_vars: int = field(init=False)

    def __post_init__(self):
        quad = np.array(self.quad, dtype=float)
        linear = np.array(self.linear, dtype=float).reshape(-1)
        if quad.ndim != 2 or quad.shape[0] != quad.shape[1]:
            raise InputError(f"Quadratic matrix must be square, got shape {quad.shape}")
        if quad.shape[0] == 0:
            raise InputError("A QUBO needs at least one variable")
        if linear.shape[0] != quad.shape[0]:
            raise InputError(
                f"Linear vector length {linear.shape[0]} does not match {quad.shape[0]} variables"
            )
        scale = max(1.0, float(np.max(np.abs(quad))))
        if not np.allclose(quad, quad.T, rtol=0.0, atol=SYMMETRY_TOL * scale):
            raise InputError("Quadratic matrix must be symmetric")

        object.__setattr__(self, "quad", _readonly(quad))
        object.__setattr__(self, "linear", _readonly(linear))
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "n_vars", quad.shape[0])

    def evaluate(self, bits: np.ndarray) -> float:
        """Value of the polynomial at a 0/1 vector."""
        q = np.asarray(bits, dtype=float)
        if q.shape != (self.n_vars,):
            raise InputError(f"Expected {self.n_vars} bits, got shape {q.shape}")
        return float(q @ self.quad @ q + self.linear @ q + self.constant)


def validate_spins(spins, n_spins: int) -> SpinConfig:
    """Return spins as an int8 vector, checking length and values."""
    values = np.asarray(spins)
    if values.shape != (n_spins,):
        raise InputError(f"Expected {n_spins} spins, got shape {values.shape}")
    if not np.all((values == 1) | (values == -1)):
        raise InputError("Spin values must be +1 or -1")
    return values.astype(np.int8)


def energy(model: IsingModel, spins: SpinConfig) -> float:
    """Energy offset - sum_{i<j} J_ij s_i s_j of one configuration."""
    s = validate_spins(spins, model.n_spins).astype(float)
    return float(model.offset - 0.5 * (s @ model.couplings @ s))


def energies(model: IsingModel, spin_rows: np.ndarray) -> np.ndarray:
    """Energies of a stack of configurations (one per row)."""
    rows = np.asarray(spin_rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != model.n_spins:
        raise InputError(f"Expected rows of {model.n_spins} spins, got shape {rows.shape}")
    return model.offset - 0.5 * np.einsum("ij,ij->i", rows @ model.couplings, rows)


def bits_to_spins(bits, with_aux: bool = False) -> SpinConfig:
    """Map bits b -> 2b - 1, optionally appending an auxiliary +1 spin."""
    b = np.asarray(bits, dtype=np.int8)
    spins = 2 * b - 1
    if with_aux:
        spins = np.append(spins, np.int8(1))
    return spins.astype(np.int8)


def spins_to_bits(spins) -> np.ndarray:
    """Map spins s -> (s + 1) / 2."""
    return ((np.asarray(spins, dtype=np.int8) + 1) // 2).astype(np.int8)


def canonical_gauge(spins: SpinConfig, aux_index: int) -> SpinConfig:
    """Flip every spin when the auxiliary spin reads -1; energy is unchanged."""
    s = np.asarray(spins, dtype=np.int8)
    if not 0 <= aux_index < s.shape[0]:
        raise InputError(f"aux_index {aux_index} out of range for {s.shape[0]} spins")
    if s[aux_index] == -1:
        return (-s).astype(np.int8)
    return s.copy()


def qubo_to_ising(q: QuboQuadratic) -> IsingModel:
    """
    Convert a QUBO into an Ising model with one auxiliary spin.

    Substituting q = (s + 1) / 2 gives
        sum_{u<v} (X_uv / 2) s_u s_v + sum_u h_u s_u + const,
        h_u = (sum_v X_uv + Y_u) / 2,
        const = trace(X) / 4 + sum(X) / 4 + sum(Y) / 2 + C.
    Linear terms become couplings to the auxiliary spin (index n_vars), which
    is read as +1. Under E = offset - sum J s s this means J_uv = -X_uv / 2 and
    J_u,aux = -h_u.

    Args:
        q: QUBO to convert

    Returns:
        IsingModel with n_vars + 1 spins and aux_index = n_vars
    """
    n = q.n_vars
    quad = q.quad
    h = 0.5 * (quad.sum(axis=1) + q.linear)
    constant = 0.25 * np.trace(quad) + 0.25 * quad.sum() + 0.5 * q.linear.sum() + q.constant

    couplings = np.zeros((n + 1, n + 1))
    couplings[:n, :n] = -0.5 * quad
    np.fill_diagonal(couplings, 0.0)
    couplings[:n, n] = -h
    couplings[n, :n] = -h
    # Exact symmetry regardless of round-off in the input.
    couplings = 0.5 * (couplings + couplings.T)

    model = IsingModel(couplings=couplings, offset=float(constant), aux_index=n)
    logger.debug(f"Converted QUBO with {n} variables into {model!r}")
    return model
