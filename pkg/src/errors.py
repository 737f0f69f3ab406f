"""
Exception hierarchy shared by all modules
The CLI maps these classes onto exit codes
"""

from typing import Optional


class IsingTrafficError(Exception):
    """Base class for every error raised by this package."""


class InputError(IsingTrafficError, ValueError):
    """Malformed or inconsistent input (dimensions, ranges, parameters)."""


class ParseError(InputError):
    """A text input could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None,
                 path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        location = ""
        if path is not None:
            location += f"{path}:"
        if line_number is not None:
            location += f"{line_number}:"
        super().__init__(f"{location} {message}".strip() if location else message)


class SizeError(InputError):
    """Instance too large for an exhaustive method."""


class NoPathError(IsingTrafficError):
    """No directed path connects an origin to its destination."""

    def __init__(self, origin: str, destination: str):
        self.origin = origin
        self.destination = destination
        super().__init__(f"No path from {origin} to {destination}")


class DivergenceError(IsingTrafficError):
    """Oscillator integration produced a non-finite value."""

    def __init__(self, step: int, seed: Optional[int] = None):
        self.step = step
        self.seed = seed
        suffix = f" (seed {seed})" if seed is not None else ""
        super().__init__(f"Integration diverged at step {step}{suffix}")


class BatchError(IsingTrafficError):
    """Every trial of a batch failed."""


class CompileError(IsingTrafficError):
    """A traffic instance cannot be compiled into an Ising model."""

    def __init__(self, message: str, link_id: Optional[str] = None):
        self.link_id = link_id
        super().__init__(message)


class TapSolveError(IsingTrafficError):
    """No feasible route assignment was found in a batch."""

    def __init__(self, feasibility_rate: float, current_lambda: float):
        self.feasibility_rate = feasibility_rate
        self.suggested_lambda = 2.0 * current_lambda
        super().__init__(
            f"All trials infeasible (feasibility rate {feasibility_rate:.3f}); "
            f"try a larger constraint coefficient, e.g. lambda={self.suggested_lambda:g}"
        )
