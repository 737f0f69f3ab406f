"""
Solver parameter and state containers for the oscillator dynamics
"""

from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import InputError
from ..ising_core import SpinConfig


FINAL = "final"
BEST = "best"
READOUTS = (FINAL, BEST)


@dataclass(frozen=True)
class SolverParams:
    """
    Parameters of the spiking-neuron CIM dynamics.

    Attributes:
        a: nonlinear gain (constant unless gain_ramp is set)
        b: inherent dissipation of the dissipative pulse
        c: interaction strength inside the tanh drive
        zeta: global mean-amplitude feedback coefficient (0 gives SNN-CIM)
        j_xk: coupling of the dissipative pulse into x
        j_kx: coupling of x into the dissipative pulse
        dt: Euler step
        n_steps: number of Euler steps per trial
        gain_ramp: optional (a_start, a_end) linear schedule over the trial
        coupling_scale: divisor applied to J inside the drive; None means max|J|
        init_amplitude: half-width of the uniform initial x distribution
        readout: 'best' keeps the lowest-energy sign pattern sampled every
            readout_stride steps (the final state included); 'final' reads
            the final state only
        readout_stride: steps between sampled sign patterns
        block_size: trials a batch integrates in lockstep
    """
    a: float = 0.5
    b: float = 0.05
    c: float = 1.0
    zeta: float = 0.05
    j_xk: float = -1.0
    j_kx: float = 1.0
    dt: float = 0.05
    n_steps: int = 5000
    gain_ramp: Optional[Tuple[float, float]] = None
    coupling_scale: Optional[float] = None
    init_amplitude: float = 0.01
    readout: str = BEST
    readout_stride: int = 10
    block_size: int = 64

    def __post_init__(self):
        if not self.b > 0:
            raise InputError(f"Dissipation b must be positive, got {self.b}")
        if not self.c > 0:
            raise InputError(f"Interaction strength c must be positive, got {self.c}")
        if self.zeta < 0:
            raise InputError(f"Feedback coefficient zeta must be non-negative, got {self.zeta}")
        if not self.dt > 0:
            raise InputError(f"Step dt must be positive, got {self.dt}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise InputError(f"n_steps must be a positive integer, got {self.n_steps}")
        if np.sign(self.j_xk) != -np.sign(self.j_kx):
            raise InputError(
                f"Cross-couplings must be antisymmetric in sign, got j_xk={self.j_xk}, j_kx={self.j_kx}"
            )
        if self.coupling_scale is not None and not self.coupling_scale > 0:
            raise InputError(f"coupling_scale must be positive, got {self.coupling_scale}")
        if not self.init_amplitude > 0:
            raise InputError(f"init_amplitude must be positive, got {self.init_amplitude}")
        if self.readout not in READOUTS:
            raise InputError(f"readout must be one of {READOUTS}, got '{self.readout}'")
        for name in ("readout_stride", "block_size"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InputError(f"{name} must be a positive integer, got {value}")
            object.__setattr__(self, name, int(value))
        if self.gain_ramp is not None:
            if len(self.gain_ramp) != 2:
                raise InputError("gain_ramp must be a pair (a_start, a_end)")
            object.__setattr__(self, "gain_ramp", (float(self.gain_ramp[0]), float(self.gain_ramp[1])))
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def horizon(self) -> float:
        return self.dt * self.n_steps

    def gain_at(self, t: float) -> float:
        """Gain a at elapsed time t (linear interpolation when ramped)."""
        if self.gain_ramp is None:
            return self.a
        a_start, a_end = self.gain_ramp
        fraction = min(max(t / self.horizon, 0.0), 1.0)
        return a_start + (a_end - a_start) * fraction

    def without_feedback(self) -> "SolverParams":
        return replace(self, zeta=0.0)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "SolverParams":
        """Build from a config section, ignoring keys that are not parameters."""
        names = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in values.items() if k in names}
        if kwargs.get("gain_ramp") is not None:
            kwargs["gain_ramp"] = tuple(kwargs["gain_ramp"])
        return cls(**kwargs)


@dataclass
class OscillatorState:
    """In-phase amplitudes x, dissipative amplitudes k, elapsed time t."""
    x: np.ndarray
    k: np.ndarray
    t: float = 0.0
    step_index: int = 0


@dataclass
class Trajectory:
    """Sampled (t, x, k) series of one trial."""
    times: List[float]
    x: List[np.ndarray]
    k: List[np.ndarray]

    def append(self, state: OscillatorState):
        self.times.append(state.t)
        self.x.append(state.x.copy())
        self.k.append(state.k.copy())


@dataclass
class TrialResult:
    spins: SpinConfig
    energy: float
    seed: int
    trajectory: Optional[Trajectory] = None
    solver: str = "gfsnn"
