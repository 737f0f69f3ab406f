"""
Quadratic approximation of the per-link Beckmann integrand

For a link the integrand g(f) = f + alpha / ((beta + 1) cap^beta) * f^(beta + 1)
is replaced on a flow interval by gamma1 f^2 + gamma2 f + gamma3, fitted by
least squares on equally spaced samples.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.linear_model import LinearRegression
from sklearn.preprocessing import PolynomialFeatures

from ..errors import InputError
from ..traffic import Link

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 201
# Errors are checked on a grid this many times denser than the fit samples.
CHECK_DENSITY = 10


@dataclass(frozen=True)
class QuadraticFit:
    """
    gamma1 f^2 + gamma2 f + gamma3 on fit_interval.

    max_rel_error is taken over the fit samples with a positive target;
    max_abs_error over a dense grid of the interval.
    """
    link_id: str
    gamma1: float
    gamma2: float
    gamma3: float
    fit_interval: Tuple[float, float]
    max_rel_error: float
    max_abs_error: float

    def __call__(self, flows):
        f = np.asarray(flows, dtype=float)
        return self.gamma1 * f ** 2 + self.gamma2 * f + self.gamma3

    def covers(self, low: float, high: float) -> bool:
        tol = 1e-9 * (1.0 + abs(low) + abs(high))
        return self.fit_interval[0] <= low + tol and self.fit_interval[1] >= high - tol

    def for_link(self, link_id: str) -> "QuadraticFit":
        """Same polynomial labelled with another link id (shared fits)."""
        return QuadraticFit(link_id, self.gamma1, self.gamma2, self.gamma3, self.fit_interval,
                            self.max_rel_error, self.max_abs_error)


def beckmann_integrand(link: Link) -> Callable[[np.ndarray], np.ndarray]:
    coefficient = link.alpha / ((link.beta + 1) * link.capacity ** link.beta)
    return lambda f: f + coefficient * f ** (link.beta + 1)


def _check_interval(interval: Sequence[float]) -> Tuple[float, float]:
    low, high = float(interval[0]), float(interval[1])
    if not (np.isfinite(low) and np.isfinite(high)) or low < 0 or not high > low:
        raise InputError(f"Fit interval must satisfy 0 <= f_lo < f_hi, got [{low}, {high}]")
    return low, high


def _least_squares(samples: np.ndarray, target: np.ndarray, degree: int,
                   middle: float, half: float) -> Tuple[float, float, float]:
    """Fit in the scaled variable u = (f - middle) / half and return (gamma1, gamma2, gamma3)."""
    u = ((samples - middle) / half).reshape(-1, 1)
    features = PolynomialFeatures(degree=degree, include_bias=False).fit_transform(u)
    regression = LinearRegression().fit(features, target)
    c0 = float(regression.intercept_)
    c1 = float(regression.coef_[0])
    c2 = float(regression.coef_[1]) if degree == 2 else 0.0
    gamma1 = c2 / half ** 2
    gamma2 = c1 / half - 2.0 * c2 * middle / half ** 2
    gamma3 = c0 - c1 * middle / half + c2 * middle ** 2 / half ** 2
    return gamma1, gamma2, gamma3


def _errors(gammas: Tuple[float, float, float], target_fn: Callable[[np.ndarray], np.ndarray],
            low: float, high: float, n_samples: int) -> Tuple[float, float]:
    gamma1, gamma2, gamma3 = gammas
    samples = np.linspace(low, high, n_samples)
    target = target_fn(samples)
    approx = gamma1 * samples ** 2 + gamma2 * samples + gamma3
    positive = target > 0
    max_rel = float(np.max(np.abs(approx[positive] - target[positive]) / target[positive])) \
        if positive.any() else 0.0
    dense = np.linspace(low, high, CHECK_DENSITY * (n_samples - 1) + 1)
    max_abs = float(np.max(np.abs(gamma1 * dense ** 2 + gamma2 * dense + gamma3 - target_fn(dense))))
    return max_rel, max_abs


def fit_target(target_fn: Callable[[np.ndarray], np.ndarray], interval: Sequence[float],
               link_id: str = "*", n_samples: int = DEFAULT_SAMPLES) -> QuadraticFit:
    """Least-squares quadratic of an arbitrary target on an interval."""
    low, high = _check_interval(interval)
    if n_samples < 3:
        raise InputError(f"Need at least 3 samples for a quadratic fit, got {n_samples}")
    samples = np.linspace(low, high, n_samples)
    target = target_fn(samples)
    middle, half = 0.5 * (low + high), 0.5 * (high - low)

    gamma1, gamma2, gamma3 = _least_squares(samples, target, 2, middle, half)
    if gamma1 < 0:
        # Only reachable through round-off on an almost linear target.
        gamma1, gamma2, gamma3 = _least_squares(samples, target, 1, middle, half)

    max_rel, max_abs = _errors((gamma1, gamma2, gamma3), target_fn, low, high, n_samples)

    fit = QuadraticFit(link_id, gamma1, gamma2, gamma3, (low, high), max_rel, max_abs)
    logger.debug(f"Fit {link_id} on [{low:g}, {high:g}]: gamma=({gamma1:.6g}, {gamma2:.6g}, "
                 f"{gamma3:.6g}), max relative error {max_rel:.3e}")
    return fit


def fit_quadratic(link: Link, interval: Sequence[float],
                  n_samples: int = DEFAULT_SAMPLES) -> QuadraticFit:
    """
    Fit the link's Beckmann integrand on an interval.

    Raises:
        InputError: degenerate or negative interval
    """
    return fit_target(beckmann_integrand(link), interval, link.id, n_samples)


def fit_shared(links: Sequence[Link], interval: Sequence[float],
               n_samples: int = DEFAULT_SAMPLES) -> QuadraticFit:
    """
    One quadratic for a set of links.

    Links with identical BPR parameters share their integrand exactly; mixed
    parameters are fitted against the mean integrand of the distinct kinds.
    """
    kinds = sorted({(l.alpha, l.beta, l.capacity) for l in links})
    if not kinds:
        raise InputError("fit_shared needs at least one link")
    integrands = [beckmann_integrand(Link("*", "a", "b", 1.0, capacity, alpha, beta))
                  for alpha, beta, capacity in kinds]
    return fit_target(lambda f: sum(fn(f) for fn in integrands) / len(integrands),
                      interval, "*", n_samples)


def fit_table(fit: QuadraticFit, link: Link, n_rows: int = 11) -> List[Tuple[float, float, float, float]]:
    """Rows (flow, exact, approx, relative error) at evenly spaced flows of the fit interval."""
    if n_rows < 2:
        raise InputError(f"n_rows must be at least 2, got {n_rows}")
    flows = np.linspace(fit.fit_interval[0], fit.fit_interval[1], n_rows)
    exact = beckmann_integrand(link)(flows)
    approx = fit(flows)
    rows = []
    for f, e, a in zip(flows, exact, approx):
        relative = abs(a - e) / e if e > 0 else float("nan")
        rows.append((float(f), float(e), float(a), float(relative)))
    return rows


def apply_fit(fit: QuadraticFit, link: Link, interval: Optional[Sequence[float]] = None,
              n_samples: int = DEFAULT_SAMPLES) -> QuadraticFit:
    """
    The fit's polynomial assigned to one link, errors measured against that link's integrand.

    Args:
        fit: Polynomial to reuse (typically a shared fit)
        link: Link receiving it
        interval: Interval to measure errors on (the fit's own interval if None)
    """
    low, high = _check_interval(fit.fit_interval if interval is None else interval)
    gammas = (fit.gamma1, fit.gamma2, fit.gamma3)
    max_rel, max_abs = _errors(gammas, beckmann_integrand(link), low, high, n_samples)
    return QuadraticFit(link.id, *gammas, fit.fit_interval, max_rel, max_abs)
