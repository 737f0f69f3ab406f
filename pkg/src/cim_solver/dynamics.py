"""
Spiking-neuron CIM dynamics and the explicit Euler step

    dx_i/dt = a x_i - x_i^3 + j_xk b k_i + tanh(c sum_j Jn_ij x_j) [+ zeta sum_j x_j / sqrt(N)]
    dk_i/dt = -b k_i + j_kx x_i

Jn is J divided by coupling_scale (max|J| unless given). The bracketed mean-
amplitude feedback term is what separates GFSNN-CIM from SNN-CIM.

Amplitudes may be one state of shape (N,) or a stack (B, N) of independent
trials. Every row goes through the same vector-matrix product, so a trial
integrates to the same bits whatever stack it shares.
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import DivergenceError, InputError
from ..ising_core import IsingModel
from .params import OscillatorState, SolverParams

logger = logging.getLogger(__name__)

SNN = "snn"
GFSNN = "gfsnn"


def resolve_coupling_scale(model: IsingModel, params: SolverParams) -> float:
    if params.coupling_scale is not None:
        return params.coupling_scale
    scale = model.max_abs_coupling
    return scale if scale > 0 else 1.0


class SnnCimDynamics:
    """Spiking-neuron CIM: DOPO amplitudes with antisymmetric dissipative pulses."""

    name = SNN

    def __init__(self, model: IsingModel, params: SolverParams):
        self.model = model
        self.params = params
        self.scaled_couplings = model.couplings / resolve_coupling_scale(model, params)
        self.sqrt_n = np.sqrt(model.n_spins)

    def local_fields(self, x: np.ndarray) -> np.ndarray:
        """Jn x for every row of x."""
        return np.matmul(x[..., None, :], self.scaled_couplings)[..., 0, :]

    def derivatives(self, x: np.ndarray, k: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        drive = np.tanh(p.c * self.local_fields(x))
        dx = p.gain_at(t) * x - x * x * x + p.j_xk * p.b * k + drive
        dk = -p.b * k + p.j_kx * x
        return dx, dk

    def step(self, state: OscillatorState) -> OscillatorState:
        """One explicit Euler step; raises DivergenceError on non-finite output."""
        dx, dk = self.derivatives(state.x, state.k, state.t)
        dt = self.params.dt
        x = state.x + dt * dx
        k = state.k + dt * dk
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(k))):
            raise DivergenceError(step=state.step_index)
        return OscillatorState(x=x, k=k, t=state.t + dt, step_index=state.step_index + 1)


class GfsnnCimDynamics(SnnCimDynamics):
    """SNN-CIM plus global mean-amplitude feedback zeta * sum(x) / sqrt(N)."""

    name = GFSNN

    def derivatives(self, x: np.ndarray, k: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
        dx, dk = super().derivatives(x, k, t)
        return dx + self.params.zeta * x.sum(axis=-1, keepdims=True) / self.sqrt_n, dk


DYNAMICS = {SNN: SnnCimDynamics, GFSNN: GfsnnCimDynamics}


def make_dynamics(model: IsingModel, params: SolverParams, variant: str = GFSNN) -> SnnCimDynamics:
    try:
        return DYNAMICS[variant](model, params)
    except KeyError:
        raise InputError(f"Unknown CIM variant '{variant}', expected one of {sorted(DYNAMICS)}")


def step(state: OscillatorState, model: IsingModel, params: SolverParams,
         variant: str = GFSNN) -> OscillatorState:
    """
    Advance the oscillator network by one Euler step.

    Args:
        state: Current amplitudes and time
        model: Ising model supplying the couplings
        params: Solver parameters
        variant: 'gfsnn' (default) or 'snn'

    Returns:
        New OscillatorState; the input is left untouched
    """
    if state.x.shape != (model.n_spins,) or state.k.shape != (model.n_spins,):
        raise InputError(
            f"State of shape {state.x.shape}/{state.k.shape} does not match {model.n_spins} spins"
        )
    return make_dynamics(model, params, variant).step(state)
