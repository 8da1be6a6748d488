"""Two-term traveling-wave shape, its speed, the period map and lambda(alpha)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .flat_front import flat_speed
from .params import ModelParams


@dataclass(frozen=True)
class WaveShape:
    """rho(x) = alpha cos q0x + alpha^2 beta cos 2q0x sampled over one period."""

    alpha: float
    q0: float
    beta: float
    x: np.ndarray      # internal units (Lc)
    rho: np.ndarray    # internal units (Lc)

    def in_um(self, Lc: float):
        """(x, rho) in micrometres."""
        return self.x * Lc, self.rho * Lc


def wave_profile(alpha: float, q0: float, beta: float, n_samples: int = 201) -> WaveShape:
    """Sample the two-term profile on [0, 2 pi/q0] (both ends included)."""
    if abs(alpha) > 1.0:
        raise ValueError("|alpha| must not exceed 1")
    if abs(alpha) > 0.5:
        warnings.warn("alpha > 0.5: the two-term expansion is outside its usual range",
                      RuntimeWarning, stacklevel=2)
    x = np.linspace(0.0, 2 * math.pi / q0, n_samples)
    rho = alpha * np.cos(q0 * x) + alpha**2 * beta * np.cos(2 * q0 * x)
    return WaveShape(alpha=alpha, q0=q0, beta=beta, x=x, rho=rho)


def wave_speed(alpha: float, p: ModelParams, V21: float, b: float) -> float:
    """C_rho = V0 + alpha^2 (V21 - b V0) in Lc/s (multiply by Lc for um/s)."""
    V0 = flat_speed(p)
    return V0 + alpha**2 * (V21 - b * V0)


def theta_of_alpha(alpha: float, b: float) -> float:
    """theta(alpha) = 1 + b alpha^2."""
    return 1.0 + b * alpha**2


def period_of_alpha(alpha: float, b: float, period0: float) -> float:
    """Period theta(alpha) * Pi0 in the units of ``period0``."""
    return theta_of_alpha(alpha, b) * period0


def leading_eigenvalue(alpha: float, q0: float, slope: float, b: float) -> float:
    """lambda(alpha) ~ q0 Lambda'(q0) alpha theta'(alpha) = 2 b q0 slope alpha^2."""
    return 2.0 * b * q0 * slope * alpha**2
