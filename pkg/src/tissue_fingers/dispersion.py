"""Growth rate Lambda(q) of boundary perturbations of the flat front.

All functions accept scalar or array ``q`` (wavenumber in 1/Lc) and use
principal square roots.  Differences of nearly equal quantities are
rewritten in cancellation-free form so the formulas stay accurate both for
q -> 0 and for q of order 10^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepError
from .numeric import is_mp
from .params import ModelParams


def _q2(q):
    if is_mp(q):
        return q * q
    q = np.asarray(q, dtype=float)
    return q * q


def _out(x):
    if is_mp(x):
        return x
    return float(x) if np.ndim(x) == 0 else x


def _arr(x):
    return x if is_mp(x) else np.asarray(x)


def _sqrt(x):
    return x.sqrt() if is_mp(x) else np.sqrt(x)


def _one_minus_sqrt1p(t):
    """1 - sqrt(1 + t) without cancellation for small t."""
    return -t / (1.0 + _sqrt(1.0 + t))


def stokes_det(q, p: ModelParams):
    """D(q) = 4 mu^2 q^2 sqrt(q^2 + xi/2mu) sqrt(q^2 + xi/mu) - (2 mu q^2 + xi)^2.

    Evaluated as -4 mu^2 (u+a)(a u^2 + 3a^2 u + a^3) / (u sqrt(u+a) sqrt(u+2a) + (u+a)^2)
    with u = q^2, a = xi/2mu, which is algebraically identical and avoids
    the O(q^4) cancellation at large q.
    """
    u = _q2(q)
    a = p.half_ratio
    num = (u + a) * (a * u * u + 3.0 * a * a * u + a**3)
    den = u * _sqrt(u + a) * _sqrt(u + 2.0 * a) + (u + a) ** 2
    return _out(-4.0 * p.mu**2 * num / den)


def stokes_det_direct(q, p: ModelParams):
    """D(q) in its direct, unsimplified form (cross-check for the stable one)."""
    u = _q2(q)
    mu, xi = p.mu, p.xi
    return _out(4 * mu**2 * u * _sqrt(u + xi / (2 * mu)) * _sqrt(u + xi / mu) - (2 * mu * u + xi) ** 2)


def _roots(q, p):
    u = _q2(q)
    s1 = _sqrt(u + 1.0)
    a = _sqrt(u + p.xi / (2.0 * p.mu))
    c = _sqrt(u + p.xi / p.mu)
    return u, s1, a, c


def lambda_t(q, p: ModelParams):
    """Traction part Lambda^t(q)."""
    mu, xi = p.mu, p.xi
    u, s1, a, c = _roots(q, p)
    D = _arr(stokes_det(q, p))
    r = p.sqrt_2mu_xi
    one_m_s1 = _one_minus_sqrt1p(u)
    one_m_s2 = _one_minus_sqrt1p(2.0 * mu * u / xi)
    t1 = xi * a * (2.0 * mu * one_m_s1 + r * one_m_s2) / (D * (s1 + a) * (r + 2.0 * mu))
    t2 = xi * u * one_m_s1 * a / (D * (c + a) * (s1 + a) * (c + s1))
    return _out(t1 + t2)


def lambda_c(q, p: ModelParams):
    """Contractile part Lambda^c(q)."""
    mu, xi = p.mu, p.xi
    u, s1, a, c = _roots(q, p)
    D = _arr(stokes_det(q, p))
    r = p.sqrt_2mu_xi
    t1 = xi * a / (D * (s1 + 1.0 + a)) * (u - 2.0 * s1 - 2.0 + 2.0 * u * u / ((s1 + 1.0 + c) * (a + c)))
    t2 = xi * a / D * (xi / (4.0 * mu + r) + 2.0 - u / (a + c))
    return _out(t1 + t2)


def lambda_s(q, p: ModelParams):
    """Surface-tension part Lambda^s(q) = xi sqrt(q^2 + xi/2mu) q^2 / D."""
    u, _, a, _ = _roots(q, p)
    D = _arr(stokes_det(q, p))
    return _out(p.xi * a * u / D)


@dataclass(frozen=True)
class DispersionPoint:
    """Growth rate and its constituents at one wavenumber."""

    q: float
    lambda_t: float
    lambda_c: float
    lambda_s: float
    lam: float
    det_D: float

    @property
    def lambda_(self) -> float:
        return self.lam


def combine(lt, lc, ls, p: ModelParams):
    """zeta_i Lt + (zeta/2mu)(1 + 2mu Lc) + gamma Ls."""
    return p.zeta_i * lt + (p.zeta / (2.0 * p.mu)) * (1.0 + 2.0 * p.mu * lc) + p.gamma * ls


def growth_rate(q, p: ModelParams) -> DispersionPoint:
    """Assemble Lambda(q) and record every component."""
    lt = lambda_t(q, p)
    lc = lambda_c(q, p)
    ls = lambda_s(q, p)
    lam = combine(lt, lc, ls, p)
    return DispersionPoint(q=q if is_mp(q) else _out(np.asarray(q, dtype=float)), lambda_t=lt, lambda_c=lc,
                           lambda_s=ls, lam=_out(lam), det_D=stokes_det(q, p))


def growth_rate_value(q, p: ModelParams):
    """Lambda(q) only (scalar or array)."""
    return growth_rate(q, p).lam


def smallq_coefficient(p: ModelParams, printed: bool = False) -> float:
    """c2 in Lambda(q) = c2 q^2 + O(q^4).

    The contractile part is zeta / (2 (2 sqrt(2mu) + sqrt(xi))^2), the q^2
    coefficient of 2 mu zeta Lambda^c / (2 mu).  ``printed=True`` returns the
    tabulated variant (zeta/2mu xi)(3 - 2 sqrt 2 - ...), which does not match
    the limit of Lambda(q)/q^2; it is kept for comparison only.
    """
    mu, zeta, zi, xi, gamma = p.mu, p.zeta, p.zeta_i, p.xi, p.gamma
    r = p.sqrt_2mu_xi
    s2mu = math.sqrt(2.0 * mu)
    sxi = math.sqrt(xi)
    if printed:
        contractile = zeta / (2.0 * mu * xi) * (3.0 - 2.0 * math.sqrt(2.0)
                                                - 2.0 * s2mu * (sxi + s2mu) / (2.0 * s2mu + sxi) ** 2)
    else:
        contractile = zeta / (2.0 * (2.0 * s2mu + sxi) ** 2)
    return mu * zi / (xi * (r + 2.0 * mu)) + contractile - gamma / r


def growth_rate_deriv(q: float, p: ModelParams, rel_step: float = 1e-6) -> float:
    """d Lambda / dq by central differences with one Richardson step.

    h = rel_step * max(1, q); the stencils at h and h/2 are combined as
    (4 D(h/2) - D(h)) / 3.
    """
    if not is_mp(q):
        q = float(q)
    h = rel_step * max(1.0, q)
    if q - h <= 0.0:
        raise StepError(f"stencil q-h = {q - h:g} leaves q > 0")

    def central(hh):
        return (growth_rate_value(q + hh, p) - growth_rate_value(q - hh, p)) / (2.0 * hh)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def large_q_limit(q, p: ModelParams):
    """Leading large-|q| behaviour -gamma|q|/mu + zeta/(4 mu)."""
    q = np.asarray(q, dtype=float)
    return _out(-p.gamma * np.abs(q) / p.mu + p.zeta / (4.0 * p.mu))
