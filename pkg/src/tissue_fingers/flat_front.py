"""Flat-front traveling wave: polarity, velocity profile and front speed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numeric import sqrt
from .errors import DomainError
from .params import ModelParams


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if np.any(y > 0.0):
        raise DomainError("the tissue occupies y <= 0; got y > 0")
    return y


def polarity_profile(y):
    """P_y(y) = e^y (P_x vanishes identically)."""
    y = _check_y(y)
    out = np.exp(y)
    return float(out) if out.ndim == 0 else out


def velocity_terms(p: ModelParams) -> list[tuple[float, float]]:
    """The flat velocity as a sum of exponentials, ``[(amplitude, rate), ...]``.

    V_y(y) = sum(A * exp(k * y)).
    """
    mu, zeta, zi, xi = p.mu, p.zeta, p.zeta_i, p.xi
    s = sqrt(xi / (2.0 * mu))
    return [
        (2.0 * zeta / (8.0 * mu - xi), 2.0),
        (-zeta * s / (8.0 * mu - xi) + zi / ((2.0 * mu - xi) * s), s),
        (-zi / (2.0 * mu - xi), 1.0),
    ]


def flat_velocity(y, p: ModelParams):
    """Closed-form V_y(y) on y <= 0."""
    y = _check_y(y)
    out = np.zeros_like(y)
    for amp, k in velocity_terms(p):
        out = out + amp * np.exp(k * y)
    return float(out) if out.ndim == 0 else out


def flat_speed(p: ModelParams) -> float:
    """Front speed V0 = zeta/(4mu + sqrt(2 mu xi)) + zeta_i/(sqrt(2 mu xi) + xi)."""
    r = p.sqrt_2mu_xi
    return p.zeta / (4.0 * p.mu + r) + p.zeta_i / (r + p.xi)


def flat_velocity_deriv(n: int, p: ModelParams) -> float:
    """n-th y-derivative of V_y at y = 0 (n = 1..4), by term-wise differentiation."""
    if n not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be 1..4, got {n}")
    return sum(amp * k**n for amp, k in velocity_terms(p))


def flat_curvature_closed(p: ModelParams) -> float:
    """d^2 V_y/dy^2 at y = 0 from the boundary condition and the ODE.

    xi zeta/(2 mu (4 mu + sqrt(2 mu xi))) - zeta_i/(sqrt(2 mu xi) + 2 mu) + zeta/mu.
    """
    r = p.sqrt_2mu_xi
    return (p.xi * p.zeta / (2.0 * p.mu * (4.0 * p.mu + r))
            - p.zeta_i / (r + 2.0 * p.mu) + p.zeta / p.mu)


@dataclass(frozen=True)
class FlatFront:
    """Flat-front solution summary for one parameter set."""

    params: ModelParams
    V0: float
    derivs: tuple  # d^n V_y(0) for n = 1..4

    @classmethod
    def of(cls, p: ModelParams) -> "FlatFront":
        return cls(p, flat_speed(p), tuple(flat_velocity_deriv(n, p) for n in (1, 2, 3, 4)))

    def deriv(self, n: int) -> float:
        return self.derivs[n - 1]

    def velocity(self, y):
        return flat_velocity(y, self.params)


def decay_depth(p: ModelParams, factor: float = 40.0) -> float:
    """Truncation depth y_min = -factor / min(1, sqrt(xi / 2 mu))."""
    return -factor / p.slowest_rate
