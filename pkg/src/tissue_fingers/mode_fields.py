"""First-order perturbation fields.

The linearized velocity for the boundary mode ``rho = e^{iqx}`` splits as
``zeta_i v^t + zeta v^c + gamma v^s`` (traction, contraction, surface
tension).  Each part is a short sum of exponentials

    v = sum_j  (c_x, c_y)_j  exp(i q x + k_j y)

built from the closed-form coefficient tables A_1jk, A_2jk and the surface
pair.  :class:`ComplexMode` stores that sum; :meth:`ComplexMode.real_part`
returns the physical field for ``rho = cos(q x)`` as a
:class:`~tissue_fingers.fields.VectorField`.

Two variants of v^t and v^c are offered.  By default the particular-solution
prefactors are taken from the tables as tabulated.  ``corrected=True``
re-derives them from the Helmholtz split of the forcing; only that variant
satisfies the bulk equations to rounding accuracy (the tabulated perp
prefactors carry a sign/factor slip, see the residual tests).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numeric import sqrt
from .dispersion import growth_rate_value, stokes_det
from .errors import NotARootError, ResonanceError
from .fields import (ExpTrigField, VectorField, fit_screened, fit_stokes,
                     solve_stokes_friction, tensor_div)
from .flat_front import flat_curvature_closed
from .params import DEFAULT_EPS_RES, ModelParams, check_denominator


@dataclass(frozen=True)
class ComplexMode:
    """Vector field sum_j (cx_j, cy_j) exp(i q x + k_j y)."""

    q: float
    terms: tuple  # ((cx, cy, k), ...)

    def __add__(self, other: "ComplexMode") -> "ComplexMode":
        return ComplexMode(self.q, self.terms + other.terms)

    def scaled(self, s: complex) -> "ComplexMode":
        return ComplexMode(self.q, tuple((s * cx, s * cy, k) for cx, cy, k in self.terms))

    def real_part(self, n: int = 1, base_q: float | None = None) -> VectorField:
        """Re(v) as a real field; base_q defaults to q (harmonic n = 1)."""
        bq = self.q if base_q is None else base_q
        vx = ExpTrigField(bq)
        vy = ExpTrigField(bq)
        for cx, cy, k in self.terms:
            cx, cy = complex(cx), complex(cy)
            vx.add_term(cx.real, k, n, "c")
            vx.add_term(-cx.imag, k, n, "s")
            vy.add_term(cy.real, k, n, "c")
            vy.add_term(-cy.imag, k, n, "s")
        return VectorField(vx.pruned(), vy.pruned())

    def boundary_vy(self) -> complex:
        """Coefficient of e^{iqx} in v_y at y = 0."""
        return complex(sum(complex(cy) for _, cy, _ in self.terms))

    def __len__(self):
        return len(self.terms)


def grad_exp(q: float, k: float, coef: complex = 1.0) -> ComplexMode:
    """coef * grad exp(iqx + ky)."""
    return ComplexMode(q, ((coef * 1j * q, coef * k, k),))


def perp_exp(q: float, k: float, coef: complex = 1.0) -> ComplexMode:
    """coef * grad_perp exp(iqx + ky) with grad_perp = (-d_y, d_x)."""
    return ComplexMode(q, ((-coef * k, coef * 1j * q, k),))


def _rates(q, p):
    s1 = sqrt(q * q + 1.0)
    a = sqrt(q * q + p.xi / (2.0 * p.mu))
    c = sqrt(q * q + p.xi / p.mu)
    return s1, a, c


def _guard_D(q, p, eps_res):
    D = stokes_det(q, p)
    check_denominator("D(q)", D, p.xi**2 + (2 * p.mu * q * q) ** 2, eps_res)
    return D


def _tilde(q, p, A1, A2):
    """A1 * v~(1) + A2 * v~(2): curl of the transverse and grad of the longitudinal mode."""
    _, a, c = _rates(q, p)
    return perp_exp(q, c, A1) + grad_exp(q, a, A2)


def traction_coeffs(q: float, p: ModelParams, eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Coefficient set of the traction field v^t (A_111 ... A_132)."""
    mu, xi = p.mu, p.xi
    D = _guard_D(q, p, eps_res)
    check_denominator("2mu-xi", 2 * mu - xi, max(mu, xi), eps_res)
    check_denominator("mu-xi", mu - xi, max(mu, xi), eps_res)
    s1, a, c = _rates(q, p)
    w = sqrt(2 * mu) / (sqrt(xi) + sqrt(2 * mu))
    iq = 1j * q
    return {
        "A111": -2 * mu * iq * s1 / D * (2 * mu * q * q + xi - 2 * mu * a * s1),
        "A112": 2 * mu * s1 / D * ((2 * mu * q * q + xi) * s1 - 2 * mu * q * q * c),
        "A121": 2 * mu**2 / D * a * ((2 * q * q + 1) * a - 2 * q * q * s1),
        "A122": -iq * mu / D * (2 * mu * (2 * q * q + 1) * c - 2 * (2 * mu * q * q + xi) * s1),
        "A131": -2 * mu * iq * a / D * w,
        "A132": -(2 * mu * q * q + xi) / D * w,
        "grad": (s1 - q * q) / (2 * mu - xi),
        "perp": iq * (s1 - 1.0) / (mu - xi),
    }


def contractile_coeffs(q: float, p: ModelParams, eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Coefficient set of the contractile field v^c (A_211 ... A_232)."""
    mu, xi = p.mu, p.xi
    D = _guard_D(q, p, eps_res)
    s1, a, c = _rates(q, p)
    k = s1 + 1.0
    r = p.sqrt_2mu_xi
    den_g = check_denominator("4mu(sqrt(q^2+1)+1)-xi", 4 * mu * k - xi, max(mu, xi), eps_res)
    den_p = check_denominator("xi-2mu(sqrt(q^2+1)+1)", xi - 2 * mu * k, max(mu, xi), eps_res)
    iq = 1j * q
    q2 = q * q
    return {
        "A211": -2 * mu * iq * k / D * (2 * mu * q2 + xi - 2 * mu * a * k),
        "A212": 2 * mu * k / D * ((2 * mu * q2 + xi) * k - 2 * mu * q2 * c),
        "A221": 4 * mu**2 * a / D * (a * (q2 + k) - q2 * k),
        "A222": -2 * mu * iq / D * (2 * mu * c * (q2 + k) - (2 * mu * q2 + xi) * k),
        "A231": 2 * mu * iq / D * a * (xi / (4 * mu + r) - a + 2),
        "A232": 1.0 / D * ((2 * mu * q2 + xi) * (xi / (4 * mu + r) + 2) - 2 * mu * q2 * c),
        "grad": (q2 - s1 - 1.0) / den_g,
        "perp": q**3 / (den_p * k),
    }


def surface_coeffs(q: float, p: ModelParams, eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Weights of v~(1), v~(2) in the surface-tension field v^s."""
    mu, xi = p.mu, p.xi
    D = _guard_D(q, p, eps_res)
    _, a, _ = _rates(q, p)
    return {"S1": 2 * mu * 1j * q**3 * a / D, "S2": q * q * (2 * mu * q * q + xi) / D}


def _derived_prefactors(q, p, which):
    """Particular-solution prefactors from splitting the forcing into grad and curl parts."""
    mu, xi = p.mu, p.xi
    s1 = sqrt(q * q + 1.0)
    if which == "t":
        # forcing (iq, 1) e^{iqx + s1 y} = (s1 - q^2) grad e + iq (1 - s1) grad_perp e
        return (s1 - q * q) / (2 * mu - xi), 1j * q * (1.0 - s1) / (mu - xi)
    k = s1 + 1.0
    # forcing (-iq k, q^2 - 2k) e^{iqx + ky} = (q^2 - k) grad e + (i q^3 / k) grad_perp e
    return (q * q - k) / (4 * mu * k - xi), 1j * q**3 / (k * (2 * mu * k - xi))


def traction_mode(q: float, p: ModelParams, corrected: bool = False) -> ComplexMode:
    A = traction_coeffs(q, p)
    s1, _, _ = _rates(q, p)
    g, pp = (A["grad"], A["perp"]) if not corrected else _derived_prefactors(q, p, "t")
    m = (grad_exp(q, s1) + _tilde(q, p, A["A111"], A["A112"])).scaled(g)
    m = m + (perp_exp(q, s1) + _tilde(q, p, A["A121"], A["A122"])).scaled(pp)
    return m + _tilde(q, p, A["A131"], A["A132"])


def contractile_mode(q: float, p: ModelParams, corrected: bool = False) -> ComplexMode:
    A = contractile_coeffs(q, p)
    s1, _, _ = _rates(q, p)
    k = s1 + 1.0
    g, pp = (A["grad"], A["perp"]) if not corrected else _derived_prefactors(q, p, "c")
    m = (grad_exp(q, k) + _tilde(q, p, A["A211"], A["A212"])).scaled(g)
    m = m + (perp_exp(q, k) + _tilde(q, p, A["A221"], A["A222"])).scaled(pp)
    return m + _tilde(q, p, A["A231"], A["A232"])


def surface_mode(q: float, p: ModelParams) -> ComplexMode:
    S = surface_coeffs(q, p)
    return _tilde(q, p, S["S1"], S["S2"])


# -- forcing and boundary data of the three split problems (real form, rho = cos qx)

def split_problem(which: str, q: float, p: ModelParams):
    """Forcing (VectorField) and tractions (shear, normal) of split problem t, c or s.

    The fields are the real parts for rho = cos(q x), i.e. the e^{iqx} data
    of the split problems with the physical constant set to one.
    """
    mu, xi = p.mu, p.xi
    s1 = sqrt(q * q + 1.0)
    f = VectorField.zero(q)
    shear = ExpTrigField(q)
    normal = ExpTrigField(q)
    if which == "t":
        f.x.add_term(-q, s1, 1, "s")
        f.y.add_term(1.0, s1, 1, "c")
        normal.add_term(sqrt(2 * mu) / (sqrt(xi) + sqrt(2 * mu)), 0.0, 1, "c")
    elif which == "c":
        k = s1 + 1.0
        f.x.add_term(q * k, k, 1, "s")
        f.y.add_term(q * q - 2 * k, k, 1, "c")
        shear.add_term(q, 0.0, 1, "s")
        normal.add_term(-(xi / (4 * mu + p.sqrt_2mu_xi) + 2.0), 0.0, 1, "c")
    elif which == "s":
        normal.add_term(-q * q, 0.0, 1, "c")
    else:
        raise ValueError(f"unknown split problem {which!r}")
    return f, shear, normal


def solve_split(which: str, q: float, p: ModelParams) -> VectorField:
    """Solution of a split problem built directly on the field algebra."""
    f, shear, normal = split_problem(which, q, p)
    vp = solve_stokes_friction(f, p.mu, p.xi)
    sh = (vp.y.dx() + vp.x.dy()).at_y0() * p.mu
    no = vp.y.dy().at_y0() * (2 * p.mu)
    return vp + fit_stokes(shear - sh, normal - no, p.mu, p.xi)


# -- assembled first order ---------------------------------------------------

def polarity_first(q0: float) -> VectorField:
    """p^(1) = (q0 e^{y s1} sin q0x, -e^{y s1} cos q0x), s1 = sqrt(q0^2+1)."""
    s1 = sqrt(q0 * q0 + 1.0)
    return VectorField(ExpTrigField.term(q0, q0, s1, 1, "s"), ExpTrigField.term(q0, -1.0, s1, 1, "c"))


def divergence_D1(q0: float, p: ModelParams) -> float:
    """Boundary divergence amplitude D1 of v^(1)."""
    mu, xi, zeta, zi = p.mu, p.xi, p.zeta, p.zeta_i
    s1 = sqrt(q0 * q0 + 1.0)
    a = sqrt(q0 * q0 + xi / (2 * mu))
    q2 = q0 * q0
    return (zi * (a + q2) / (2 * mu * a * (a + s1))
            - zeta / (mu * a) * (s1 + 1 + xi / (4 * mu) - q2 / 2
                                 + (q2 * s1 - 2 * s1 - 2) / (s1 + 1 + a)))


def vx1_amplitude(q0: float, p: ModelParams, D1: float | None = None) -> float:
    """Coefficient of sin(q0 x) in v_x^(1) on y = 0."""
    if D1 is None:
        D1 = divergence_D1(q0, p)
    return (D1 + flat_curvature_closed(p) - p.zeta / p.mu
            + (2 * p.zeta + p.gamma * q0 * q0) / (2 * p.mu)) / q0


@dataclass(frozen=True)
class FirstOrder:
    """Order-alpha fields at the critical wavenumber (rho^(1) = cos q0 x)."""

    q0: float
    p1: VectorField
    v1: VectorField
    D1: float
    vx1_amp: float
    vy1_amp: float


def first_order_velocity(q0: float, p: ModelParams, corrected: bool = False) -> VectorField:
    """Re(zeta_i v^t + zeta v^c + gamma v^s) at q0."""
    m = (traction_mode(q0, p, corrected).scaled(p.zeta_i)
         + contractile_mode(q0, p, corrected).scaled(p.zeta)
         + surface_mode(q0, p).scaled(p.gamma))
    return m.real_part()


def assemble_first_order(q0: float, p: ModelParams, corrected: bool = False,
                         tol_root: float = 1e-9) -> FirstOrder:
    """Build the first-order bundle; q0 must be a root of Lambda."""
    lam = growth_rate_value(q0, p)
    scale = abs(p.zeta) / (2 * p.mu) + p.zeta_i * 1e-3 / p.mu + p.gamma * q0 / p.mu
    if abs(lam) > tol_root * scale:
        raise NotARootError(f"Lambda({q0:g}) = {lam:.3e} is not zero")
    D1 = divergence_D1(q0, p)
    return FirstOrder(q0=q0, p1=polarity_first(q0), v1=first_order_velocity(q0, p, corrected),
                      D1=D1, vx1_amp=vx1_amplitude(q0, p, D1), vy1_amp=-p.zeta / (2 * p.mu))


def first_order_solved(q0: float, p: ModelParams) -> VectorField:
    """v^(1) obtained on the field algebra (independent of the tables)."""
    return (solve_split("t", q0, p) * p.zeta_i + solve_split("c", q0, p) * p.zeta
            + solve_split("s", q0, p) * p.gamma)
