"""Third-order balance and the period-correction coefficient b.

At order alpha^3 only the ``cos(q0 x)`` harmonic of the kinematic condition
matters.  It is linear in b, ``k1 b + k2 = 0`` with ``k1 = -q0 Lambda'(q0)``.
The b-free part of the velocity, v^(311), is written with the coefficient
sets H (forcing), I (particular solution) and M, N (homogeneous part fitted
to the tractions Q, R).

``bifurcation_coefficient`` evaluates b with the closed-form balance
(primary) and with the equivalent form that adds the boundary value of
v_y^(311) to the collected lower-order terms (cross-check).

Two sets of second-order inputs are supported through :class:`SecondInputs`:

* ``"printed"`` uses the tabulated closed forms for D2, d_y v_y^(2) and
  the v_x^(2) amplitude;
* ``"corrected"`` re-derives those three from quantities that pass the
  residual checks (see :func:`corrected_second_inputs`).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .numeric import DEFAULT_DPS, extended, mp_params, sqrt, to_float, to_mp
from .dispersion import growth_rate_deriv, stokes_det
from .errors import ResonanceError, TransversalityError
from .fields import ExpTrigField, VectorField
from .flat_front import flat_curvature_closed, flat_speed, flat_velocity_deriv
from .params import DEFAULT_EPS_RES, ModelParams, check_denominator
from .second_order import SecondOrder, second_order_boundary, second_order_coeffs

MODES = ("printed", "corrected")


def _r(q0, p):
    s1 = sqrt(q0 * q0 + 1.0)
    r4 = sqrt(4 * q0 * q0 + 1.0)
    a = sqrt(q0 * q0 + p.xi / (2 * p.mu))
    c = sqrt(q0 * q0 + p.xi / p.mu)
    a2 = sqrt(4 * q0 * q0 + p.xi / (2 * p.mu))
    return s1, r4, a, c, a2


def _dxvx1(q0, p, D1):
    """Amplitude of d_x v_x^(1) (cos q0x) on y = 0."""
    return D1 + flat_curvature_closed(p) - p.zeta / p.mu + (2 * p.zeta + p.gamma * q0 * q0) / (2 * p.mu)


# -- second-order inputs -----------------------------------------------------

@dataclass(frozen=True)
class SecondInputs:
    """Second-order boundary data entering the third-order balance."""

    D2: float          # div w^(2)|_0 = D2/(2 mu a2) cos 2q0x
    dyvy_const: float  # d_y v_y^(2)|_0 constant part
    dyvy_cos2: float   # d_y v_y^(2)|_0 cos 2q0x part
    vx_sin2: float     # v_x^(2)|_0 sin 2q0x amplitude
    mode: str


def printed_second_inputs(q0: float, p: ModelParams, so: SecondOrder) -> SecondInputs:
    sb = second_order_boundary(q0, p, so)
    return SecondInputs(so.D2, sb.dyvy_const, sb.dyvy_cos2, sb.vx_sin2, "printed")


def corrected_second_inputs(q0: float, p: ModelParams, so: SecondOrder) -> SecondInputs:
    """Second-order boundary data re-derived from verified ingredients.

    * d_y v_y^(2) comes straight from the order-2 normal-stress condition,
      keeping the d^3 V_y / dy^3 term;
    * the divergence boundary condition keeps the (8 mu q0^2 + xi) v_y^(2)
      contribution in full and the e^{(1+sqrt(4q0^2+1)) y} forcing of the
      divergence equation collects both the x- and y-parts;
    * the v_x^(2) amplitude follows from div = d_x v_x + d_y v_y.
    """
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, r4, _, _, a2 = _r(q0, p)
    q2 = q0 * q0
    beta, D1 = so.beta, so.D1
    K = flat_curvature_closed(p)
    V3 = flat_velocity_deriv(3, p)
    sb = second_order_boundary(q0, p, so)
    A1 = zi - 2 * zeta * (s1 + 1 + xi / (4 * mu))           # 2 mu d_yy v_y^(1)|_0
    dy_const = (-zeta * q2 / 2 - mu * V3 / 2 - A1 / 2) / (2 * mu)
    dy_cos2 = (zeta * q2 / 2 - 2 * mu * K * beta - mu * V3 / 2 - A1 / 2
               - 4 * gamma * q2 * beta) / (2 * mu)
    g4 = q2 + 2 * s1 - 1 - 4 * beta
    # y-forcing of the w^(2) equation at y = 0 (cos 2q0x part)
    rhs0 = -zi * (q2 + 2 * s1 - 1) / 4 + zi * beta + zeta * (s1 - q2) + zeta * (
        g4 * (1 + r4) / 2 - q2 * s1 + 4 * beta * q2)
    div_bc = rhs0 + mu * sb.dxx_wy_plus_dxy_wx_cos2 + (8 * mu * q2 + xi) * sb.vy_cos2
    forcing = {
        2 * s1: 2 * zeta * (q2 - s1) ** 2,
        r4: zi * (q2 * (s1 - 4 * beta) + 0.25 * r4 * (4 * beta - q2 - 2 * s1 + 1)),
        1 + r4: zeta * (1 + r4) * (g4 * (1 + r4) / 2 - 2 * q2 * s1 + 8 * beta * q2),
    }
    D2 = div_bc - sum(f / (a2 + k) for k, f in forcing.items())
    vx_sin2 = (D2 / (2 * mu * a2) - dy_cos2) / (2 * q0)
    return SecondInputs(D2, dy_const, dy_cos2, vx_sin2, "corrected")


def second_inputs(q0: float, p: ModelParams, so: SecondOrder, mode: str = "printed") -> SecondInputs:
    if mode == "printed":
        return printed_second_inputs(q0, p, so)
    if mode == "corrected":
        return corrected_second_inputs(q0, p, so)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


# -- p^(311) and forcing coefficients ----------------------------------------

def p311_boundary(q0: float, beta: float) -> tuple[float, float]:
    """(sin q0x coefficient of p_x^(311), cos q0x coefficient of p_y^(311)) on y = 0."""
    s1 = sqrt(q0 * q0 + 1.0)
    r4 = sqrt(4 * q0 * q0 + 1.0)
    hx = beta * q0 * s1 / 2 + r4 * (q0 / 4 * s1 - beta * q0) - q0**3 / 2 - q0 / 8
    hy = (beta / 2 * (s1 - 2 * q0 * q0 - 1) - s1 / 2 + 5 * q0 * q0 / 8 + 0.5
          - r4 * (s1 / 4 + q0 * q0 / 8 - 1 / 8 - beta / 2))
    return hx, hy


def p311_field(q0: float, beta: float) -> VectorField:
    hx, hy = p311_boundary(q0, beta)
    s1 = sqrt(q0 * q0 + 1.0)
    return VectorField(ExpTrigField.term(q0, hx, s1, 1, "s"), ExpTrigField.term(q0, hy, s1, 1, "c"))


def h_coeffs(q0: float, beta: float) -> dict:
    """H_x^(1..3), H_y^(1..3) of the v^(311) forcing."""
    s1 = sqrt(q0 * q0 + 1.0)
    r4 = sqrt(4 * q0 * q0 + 1.0)
    q2 = q0 * q0
    H1x, H1y = p311_boundary(q0, beta)
    w = s1 / 2 - q2 / 4 - 0.25
    H2x = q0 * (1 + s1) * w + (1 + s1) * H1x
    H2y = w * (q2 - 2 * (1 + s1)) + q0 * H1x + 2 * (1 + s1) * H1y
    H3x = q0**3 / 2 * s1 - 2 * beta * q0**3 + (s1 + r4) * (q0 / 8 - q0**3 / 8 - beta * q0 / 2)
    H3y = q2 / 8 - q0**4 / 8 - beta * q2 / 2 - (s1 + r4) * (q2 / 4 + s1 / 2 - 0.25 - beta)
    return {"H1x": H1x, "H1y": H1y, "H2x": H2x, "H2y": H2y, "H3x": H3x, "H3y": H3y}


def i_coeffs(q0: float, p: ModelParams, H: dict, eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Particular-solution amplitudes I_x^(1..3), I_y^(1..3) and the denominators d1, d2."""
    mu, xi, zeta, zi = p.mu, p.xi, p.zeta, p.zeta_i
    s1, r4, _, _, _ = _r(q0, p)
    q2 = q0 * q0
    sc = max(mu, xi) ** 2
    d1 = 8 * mu**2 * q2 + (16 * mu**2 - 6 * mu * xi) * (1 + s1) + xi**2
    check_denominator("d1", d1, sc * (1 + q2), eps_res)
    den1 = check_denominator("2mu^2-3mu xi+xi^2", 2 * mu**2 - 3 * mu * xi + xi**2, sc, eps_res)
    root = sqrt(4 * q0**4 + 5 * q2 + 1)
    d2 = (4 * mu * q2 * (16 * mu * q2 + 18 * mu - 3 * xi)
          + 2 * mu * (16 * mu * q2 + 8 * mu - 3 * xi) * root + 16 * mu**2 - 6 * mu * xi + xi**2)
    check_denominator("d2", d2, sc * (1 + q2) ** 2, eps_res)
    I1x = zeta / d1 * (H["H2x"] * (mu * (q2 + 4 * s1 + 4) - xi) + H["H2y"] * mu * q0 * (1 + s1))
    I1y = zeta / d1 * (H["H2y"] * (mu * (2 * s1 + 2 - q2) - xi) - H["H2x"] * mu * q0 * (1 + s1))
    I2x = -zi / den1 * (H["H1x"] * (mu * q2 + 2 * mu - xi) + H["H1y"] * mu * q0 * s1)
    I2y = -zi / den1 * (H["H1y"] * (mu - mu * q2 - xi) - H["H1x"] * mu * q0 * s1)
    I3x = zeta / d2 * ((9 * mu * q2 + 4 * mu + 4 * mu * root - xi) * H["H3x"]
                       + mu * q0 * (s1 + r4) * H["H3y"])
    I3y = zeta / d2 * ((3 * mu * q2 + 2 * mu + 2 * mu * root - xi) * H["H3y"]
                       - mu * q0 * (s1 + r4) * H["H3x"])
    return {"I1x": I1x, "I1y": I1y, "I2x": I2x, "I2y": I2y, "I3x": I3x, "I3y": I3y,
            "d1": d1, "d2": d2}


def qr_coeffs(q0: float, p: ModelParams, so: SecondOrder, si: SecondInputs) -> tuple[float, float]:
    """Tractions Q (shear, sin q0x) and R (normal, cos q0x) of the v^(311) problem.

    Q and R are the b-free parts.  The v_x^(2) amplitude enters Q through
    the combination ``4 q0 mu vx_sin2``; R uses V^(21).
    """
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, r4, _, _, _ = _r(q0, p)
    q2 = q0 * q0
    beta, D1 = so.beta, so.D1
    dx1 = _dxvx1(q0, p, D1)
    vx2_term = 4 * q0 * mu * si.vx_sin2
    Q = ((beta * gamma - zeta) * q0**3 + zeta * q0 / 4 * (s1 - 4 * beta) * (1 + r4) + zeta * q0 / 4 * s1
         - beta * (mu * q0 - xi / (2 * q0)) * dx1
         + beta / 2 * (q0 * zeta * (1 + s1) + q0 * zi)
         - q0 / 8 * (zi * s1 + zeta * xi / (2 * mu) + 2 * zeta)
         - (4 * mu * q2 + xi) / (8 * mu * q0) * vx2_term)
    r = p.sqrt_2mu_xi
    R = (-2 * beta * zeta * q2 - zi * beta / 2 - zi / 4 + (xi / 8 - 3 * mu * q2 / 4) * D1
         - 3 * mu * q2 / 4 * (zeta * xi / (2 * mu * (4 * mu + r)) - zi / (r + 2 * mu))
         + beta * zeta * (s1 + r4) + 1.5 * zeta - 2 * zeta * s1
         - xi * (so.V21 - zeta * beta / (4 * mu)) - xi * gamma * q2 / (8 * mu)
         - zeta / 4 * (q2 + 2 * s1 - 1) * (1 + r4) + 3 * zi / 8 * s1
         - gamma * q0**4 / 4 + zeta * q2)
    return Q, R


def mn_coeffs(q0: float, p: ModelParams, Q: float, R: float, I: dict,
              eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Homogeneous amplitudes M, N (and Q~, R~) of v^(311)."""
    mu, xi = p.mu, p.xi
    s1, r4, a, c, _ = _r(q0, p)
    q2 = q0 * q0
    D = stokes_det(q0, p)
    check_denominator("D(q0)", D, xi**2 + (2 * mu * q2) ** 2, eps_res)
    Iy = I["I1y"] + I["I2y"] + I["I3y"]
    Ix = I["I1x"] + I["I2x"] + I["I3x"]
    Qt = Q + mu * q0 * Iy - mu * (I["I1x"] + s1 * Ix + r4 * I["I3x"])
    Rt = R - 2 * mu * (I["I1y"] + s1 * Iy + r4 * I["I3y"])
    M = -(2 * mu * q0 * c * Qt + (2 * mu * q2 + xi) * Rt) / D
    N = ((2 * mu * q2 + xi) * Qt + 2 * mu * q0 * a * Rt) / D
    return {"M": M, "N": N, "Qt": Qt, "Rt": Rt, "D": D}


def v311_field(q0: float, p: ModelParams, I: dict, MN: dict) -> VectorField:
    s1, r4, a, c, _ = _r(q0, p)
    vx = ExpTrigField(q0)
    vy = ExpTrigField(q0)
    for key, k in (("1", 1 + s1), ("2", s1), ("3", r4 + s1)):
        vx.add_term(I["I" + key + "x"], k, 1, "s")
        vy.add_term(I["I" + key + "y"], k, 1, "c")
    vx.add_term(-q0 * MN["M"], a, 1, "s")
    vx.add_term(-c * MN["N"], c, 1, "s")
    vy.add_term(a * MN["M"], a, 1, "c")
    vy.add_term(q0 * MN["N"], c, 1, "c")
    return VectorField(vx, vy)


def v311_boundary_vy(q0: float, p: ModelParams, I: dict, MN: dict) -> float:
    _, _, a, _, _ = _r(q0, p)
    return I["I1y"] + I["I2y"] + I["I3y"] + a * MN["M"] + q0 * MN["N"]


# -- collected lower-order terms of the kinematic balance -------------------

def lower_order_bracket_printed(q0: float, p: ModelParams, so: SecondOrder) -> float:
    """Lower-order part of the cos(q0 x) kinematic balance as tabulated."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, _, _, _, a2 = _r(q0, p)
    q2 = q0 * q0
    K = flat_curvature_closed(p)
    return (so.beta * so.D1 + so.D2 / (8 * mu * a2)
            + (-zeta / 2 + zeta * s1 - zi / 8 + zeta * xi / (16 * mu) - 5 * zeta * q2 / 8
               - so.beta * gamma * q2) / (4 * mu)
            + 0.75 * so.beta * K)


def lower_order_bracket(q0: float, p: ModelParams, so: SecondOrder, si: SecondInputs) -> float:
    """Lower-order part of the cos(q0 x) kinematic balance, term by term."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, _, _, _, _ = _r(q0, p)
    q2 = q0 * q0
    beta = so.beta
    t1 = -beta * gamma * q2 / (4 * mu)
    t2 = 3 / (16 * mu) * (zi - 2 * zeta * (s1 + 1 + xi / (4 * mu)))
    t3 = si.dyvy_const + si.dyvy_cos2 / 2 + q0 * si.vx_sin2 / 2
    t4 = beta * _dxvx1(q0, p, so.D1)
    t5 = flat_velocity_deriv(3, p) / 8
    t6 = zeta * q2 / (8 * mu)
    return t1 + t2 + t3 + t4 + t5 + t6


@dataclass(frozen=True)
class Bifurcation:
    """Result of the weakly nonlinear analysis at q0."""

    q0: float
    slope: float
    beta: float
    V21: float
    b: float
    b_crosscheck: float
    classification: str
    mode: str
    second: SecondOrder
    inputs: SecondInputs
    Q: float
    R: float
    v311_vy0: float
    lambda_scale: float  # 2 b q0 Lambda'(q0): growth rate per unit period shift
    warnings: tuple = field(default_factory=tuple)


def classify(b: float, slope: float, tol: float = 0.0) -> str:
    """Stable (supercritical) branch iff b * slope < 0; b = 0 is degenerate."""
    if abs(b) <= tol or b == 0.0:
        return "degenerate"
    return "supercritical" if b * slope < 0 else "subcritical"


def closed_form_b(q0: float, p: ModelParams, so: SecondOrder, Q: float, R: float, I: dict,
                slope: float, bracket: float) -> float:
    """b from the closed-form balance written with Q, R and the I amplitudes."""
    mu, xi = p.mu, p.xi
    s1, r4, a, _, _ = _r(q0, p)
    q2 = q0 * q0
    D = stokes_det(q0, p)
    Iy = I["I1y"] + I["I2y"] + I["I3y"]
    Ix = I["I1x"] + I["I2x"] + I["I3x"]
    w = (D + 2 * mu * xi * q2 + xi**2) / (2 * q0 * D)
    rhs = (w / mu * Q + xi * a / D * R - Iy
           + w * (q0 * Iy - I["I1x"] - s1 * Ix - r4 * I["I3x"])
           - 2 * mu * xi * a / D * (I["I1y"] + s1 * Iy + r4 * I["I3y"])
           - bracket)
    return rhs / (-q0 * slope)


def bifurcation_coefficient(q0: float, p: ModelParams, mode: str = "printed",
                            eps_res: float = DEFAULT_EPS_RES, slope: float | None = None,
                            dps: int | None = DEFAULT_DPS) -> Bifurcation:
    """Evaluate beta, V21 and b at the critical wavenumber q0.

    ``b`` follows the closed-form balance; ``b_crosscheck`` adds v_y^(311)(0)
    to the collected lower-order terms and divides by q0 Lambda'(q0).

    The closed forms cancel badly for large q0, so by default they are
    evaluated with ``dps`` decimal digits (mpmath) and the results rounded
    back to float.  ``dps=None`` keeps everything in double precision.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if dps is None:
        return _bifurcation(q0, p, mode, eps_res, slope)
    with extended(dps):
        res = _bifurcation(to_mp(q0), mp_params(p), mode, eps_res,
                           None if slope is None else to_mp(slope))
    return to_float(res)


def _bifurcation(q0, p, mode, eps_res, slope):
    if slope is None:
        slope = growth_rate_deriv(q0, p)
    scale = (abs(p.zeta) + p.zeta_i + p.gamma * q0 * q0) / p.mu
    if abs(slope) * q0 <= 1e-12 * scale:
        raise TransversalityError(f"d Lambda/dq vanishes at q0 = {float(q0):g}")
    so = second_order_coeffs(q0, p, 0.0, eps_res)
    si = second_inputs(q0, p, so, mode)
    if mode == "corrected":
        so = replace(so, D2=si.D2)
    H = h_coeffs(q0, so.beta)
    I = i_coeffs(q0, p, H, eps_res)
    Q, R = qr_coeffs(q0, p, so, si)
    MN = mn_coeffs(q0, p, Q, R, I, eps_res)
    vy0 = v311_boundary_vy(q0, p, I, MN)
    bracket = lower_order_bracket_printed(q0, p, so) if mode == "printed" else lower_order_bracket(q0, p, so, si)
    b_main = closed_form_b(q0, p, so, Q, R, I, slope, bracket)
    b_cross = (vy0 + bracket) / (q0 * slope)
    warnings = list(so.warnings)
    denom = max(abs(b_main), abs(b_cross))
    if abs(b_main - b_cross) > 1e-6 * max(1.0, denom):
        warnings.append(f"b estimates differ: {float(b_main):.10g} vs {float(b_cross):.10g}")
    return Bifurcation(q0=q0, slope=slope, beta=so.beta, V21=so.V21, b=b_main, b_crosscheck=b_cross,
                       classification=classify(b_main, slope), mode=mode, second=so, inputs=si,
                       Q=Q, R=R, v311_vy0=vy0, lambda_scale=2 * b_main * q0 * slope,
                       warnings=tuple(warnings))


