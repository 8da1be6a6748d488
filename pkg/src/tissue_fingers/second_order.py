"""Second-order (alpha^2) quantities at the critical wavenumber.

The order-alpha^2 correction splits into a part driven by the first-order
fields (``p^(21)``, ``v^(21)``) and the linear response to the boundary
correction ``rho^(2) = beta cos(2 q0 x)``.  This module evaluates the
closed-form coefficients of that split:

* :func:`p21_field`, :func:`v21_field` - explicit fields (v^(21) depends on b),
* :func:`second_order_coeffs` - T_x, T_y, the B table, E, F, G, beta and
  the constant shift V21 (evaluated two ways),
* :func:`second_order_boundary` - boundary values of v^(2) and of its
  divergence that the third-order balance needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numeric import sqrt
from .dispersion import growth_rate_value, stokes_det
from .errors import ResonanceError
from .fields import ExpTrigField, VectorField
from .flat_front import flat_curvature_closed, flat_speed
from .mode_fields import divergence_D1
from .params import DEFAULT_EPS_RES, ModelParams, check_denominator


def _roots(q0, p):
    s1 = sqrt(q0 * q0 + 1.0)
    r4 = sqrt(4 * q0 * q0 + 1.0)
    a2 = sqrt(4 * q0 * q0 + p.xi / (2 * p.mu))
    c2 = sqrt(4 * q0 * q0 + p.xi / p.mu)
    return s1, r4, a2, c2


def tractions_T(q0: float, p: ModelParams, D1: float | None = None) -> dict:
    """Boundary tractions T_x, T_y^(1), T_y^(2) of the v^(21) problem."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1 = sqrt(q0 * q0 + 1.0)
    if D1 is None:
        D1 = divergence_D1(q0, p)
    r = p.sqrt_2mu_xi
    dxvx1 = D1 + zeta * xi / (2 * mu * (4 * mu + r)) - zi / (r + 2 * mu) + (2 * zeta + gamma * q0 * q0) / (2 * mu)
    Tx = (q0 / 2 * (zi - zeta * s1 - zeta) - gamma * q0**3 / 2
          - (4 * mu * q0 * q0 + xi) / (2 * q0) * dxvx1)
    Ty1 = zeta * (s1 - q0 * q0 / 2 + xi / (8 * mu)) - zi / 4
    Ty2 = zeta * (s1 + q0 * q0 / 2 + xi / (8 * mu)) - zi / 4
    return {"Tx": Tx, "Ty1": Ty1, "Ty2": Ty2}


def b_table(q0: float, p: ModelParams, b: float = 0.0,
            eps_res: float = DEFAULT_EPS_RES) -> dict:
    """B_x^(1..3), B_y^(1..9) of the explicit v^(21)."""
    mu, xi, zeta, zi = p.mu, p.xi, p.zeta, p.zeta_i
    s1, r4, _, _ = _roots(q0, p)
    q2 = q0 * q0
    sc = max(mu, xi) ** 2
    d1 = check_denominator("4mu^2-6mu xi+2xi^2", 4 * mu**2 - 6 * mu * xi + 2 * xi**2, sc, eps_res)
    d1y = d1 / 2.0
    big = 32 * mu**2 * q2 + 2 * (8 * mu**2 - 3 * mu * xi) * (1 + r4) + xi**2
    check_denominator("v21 mixed-rate denominator", big, sc * (1 + q2), eps_res)
    d3 = check_denominator("32mu^2-12mu xi+xi^2", 32 * mu**2 - 12 * mu * xi + xi**2, sc, eps_res)
    d2mx = check_denominator("2mu-xi", 2 * mu - xi, max(mu, xi), eps_res)
    d8mx = check_denominator("8mu-xi", 8 * mu - xi, max(mu, xi), eps_res)
    d8s = check_denominator("8mu(q0^2+1)-xi", 8 * mu * (q2 + 1) - xi, max(mu, xi), eps_res)
    g = q2 + 2 * s1 - 1
    h = g * (1 + r4) - 2 * q2 * s1
    Bx1 = zi / d1 * ((mu * (4 * q2 + 2) - xi) * q0 * s1 - mu * q0 * r4 * g)
    Bx2 = (-zeta * q0 * s1 * (1 + r4) * (4 * mu * (q2 + r4 + 1) - xi) / (2 * big)
           + zeta * q0 * mu * (1 + r4) * h / big)
    Bx3 = zeta * (q2 - s1) / d3 * (4 * mu * q0**3 + (8 * mu - xi) * q0 - 4 * mu * q0 * s1)
    By1 = zi / d1y * (-mu * q2 * r4 * s1 - 0.25 * (mu * (1 - 4 * q2) - xi) * g)
    By2 = (zeta * q2 * mu * s1 * (4 * q2 + 2 * r4 + 2) / big
           + zeta * (mu * (-4 * q2 + 2 * r4 + 2) - xi) * h / (2 * big))
    By3 = zeta * (q2 - s1) / d3 * (-4 * mu * q2 * s1 + 4 * mu * q2 - 4 * mu + xi)
    By4 = -zi / d2mx * ((2 * s1 - q2 - 1) / 4 - b)
    By5 = -zi * b / d2mx
    By6 = zeta / d8mx * (2 * s1 - q2 - 1 - 2 * b)
    By7 = 4 * zeta * b / d8mx
    By8 = zeta * s1 / d8s
    By9 = zi * b / d2mx - zeta * b * xi / (2 * mu * d8mx)
    return {"Bx1": Bx1, "Bx2": Bx2, "Bx3": Bx3, "By1": By1, "By2": By2, "By3": By3,
            "By4": By4, "By5": By5, "By6": By6, "By7": By7, "By8": By8, "By9": By9}


@dataclass(frozen=True)
class SecondOrder:
    """Closed-form second-order coefficients (b enters only through B_y^(4..9), G)."""

    q0: float
    b: float
    D1: float
    T: dict
    B: dict
    E: float
    F: float
    G: float
    lambda_2q0: float
    beta: float
    V2: float            # first equality: constant term of v_y^(2) balance
    V21: float           # b-independent part from the first equality
    V21_alt: float       # b-independent part from the second equality
    D2: float
    warnings: tuple = field(default_factory=tuple)


def second_order_coeffs(q0: float, p: ModelParams, b: float = 0.0,
                        eps_res: float = DEFAULT_EPS_RES) -> SecondOrder:
    """Evaluate T, B, E, F, G, beta, V^(2) and D2 at the critical wavenumber."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, r4, a2, c2 = _roots(q0, p)
    q2 = q0 * q0
    D1 = divergence_D1(q0, p)
    T = tractions_T(q0, p, D1)
    B = b_table(q0, p, b, eps_res)
    D2q = stokes_det(2 * q0, p)
    check_denominator("D(2q0)", D2q, xi**2 + (8 * mu * q2) ** 2, eps_res)
    sx = -mu * (B["Bx1"] * r4 + B["Bx2"] * (1 + r4) + 2 * B["Bx3"] * s1) + 2 * mu * q0 * (
        B["By1"] + B["By2"] + B["By3"]) + T["Tx"]
    sy = -2 * mu * (B["By1"] * r4 + B["By2"] * (1 + r4) + 2 * B["By3"] * s1) + T["Ty2"]
    E = -(4 * mu * q0 * c2 * sx + (8 * mu * q2 + xi) * sy) / D2q
    F = ((8 * mu * q2 + xi) * sx + 4 * mu * q0 * a2 * sy) / D2q
    r = p.sqrt_2mu_xi
    G = T["Ty1"] / r - sqrt(2 * mu / xi) * (
        B["By4"] + B["By5"] + 2 * B["By6"] + B["By7"] + 2 * B["By8"] * s1 + B["By9"])
    lam2 = growth_rate_value(2 * q0, p)
    if lam2 == 0.0:
        raise ResonanceError("Lambda(2q0)", "second harmonic is neutral")
    K = flat_curvature_closed(p)
    beta = (-(B["By1"] + B["By2"] + B["By3"] + E * a2 + 2 * q0 * F) / lam2
            + (D1 + gamma * q2 / mu) / (2 * lam2) + 3 * K / (4 * lam2))
    V2 = B["By4"] + B["By6"] + B["By8"] + G + 0.5 * D1 + 0.25 * K
    V0 = flat_speed(p)
    V21_alt = ((2 * s1 - q2 - 1) * (zi / (4 * (r + xi)) - zeta / (2 * r + xi))
               - zeta * s1 / (2 * r * s1 + xi) + T["Ty1"] / r + 0.5 * D1 + 0.25 * K)
    D2 = divergence_D2(q0, p, beta, D1)
    warnings = []
    if abs(lam2) < 1e-6 * (abs(zeta) / (2 * mu) + gamma * q0 / mu):
        warnings.append("Lambda(2q0) is close to zero; beta is ill-conditioned")
    return SecondOrder(q0=q0, b=b, D1=D1, T=T, B=B, E=E, F=F, G=G, lambda_2q0=lam2,
                       beta=beta, V2=V2, V21=V2 + b * V0, V21_alt=V21_alt, D2=D2,
                       warnings=tuple(warnings))


def divergence_D2(q0: float, p: ModelParams, beta: float, D1: float | None = None) -> float:
    """Amplitude D2 with div w^(2)|_{y=0} = D2 / (2 mu a2) cos(2 q0 x)."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, r4, a2, _ = _roots(q0, p)
    q2 = q0 * q0
    if D1 is None:
        D1 = divergence_D1(q0, p)
    K = flat_curvature_closed(p)
    g4 = q2 + 2 * s1 - 1 - 4 * beta
    return (-xi / 2 * D1 + gamma * q0**4 + zi * q2 + 2 * zeta * q2 * (4 * beta - s1 - 1) + zeta * s1
            + (2 * mu * q2 - xi / 4) * K
            + 0.25 * (2 * zeta + 2 * zeta * r4 - zi) * g4
            + zi / (a2 + r4) * (4 * beta * q2 - q2 * s1 + 0.25 * r4 * g4)
            - 2 * zeta / (a2 + 2 * s1) * (q2 - s1) ** 2
            - zeta * (1 + r4) / (a2 + 1 + r4) * (4 * beta * q2 - q2 * s1 + 0.5 * g4 * (1 + r4)))


@dataclass(frozen=True)
class SecondOrderBoundary:
    """Boundary data of v^(2) on y = 0 (cos 2q0x / sin 2q0x coefficients and constants)."""

    vy_const: float
    vy_cos2: float
    dyvy_const: float
    dyvy_cos2: float
    vx_sin2: float
    div_w_cos2: float
    dxx_wy_plus_dxy_wx_cos2: float


def second_order_boundary(q0: float, p: ModelParams, so: SecondOrder) -> SecondOrderBoundary:
    """Boundary values of v^(2) obtained from the closed forms."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    s1, _, a2, _ = _roots(q0, p)
    q2 = q0 * q0
    r = p.sqrt_2mu_xi
    D1, D2, beta = so.D1, so.D2, so.beta
    K = flat_curvature_closed(p)
    vy_cos2 = -zeta * beta / (2 * mu) + 0.5 * (
        D1 + 3 * zeta * xi / (4 * mu * (4 * mu + r)) - 3 * zi / (2 * r + 4 * mu)
        + (6 * zeta + 4 * gamma * q2) / (4 * mu))
    vy_const = -0.5 * D1 - 0.25 * K + so.V2
    dy_const = (-0.75 * zeta * q2 - zi / 4 + zeta * s1 + zeta * xi / (8 * mu)) / (2 * mu)
    dy_cos2 = (0.75 * zeta * q2 + zeta * xi / (8 * mu) + zeta * s1 - 2 * mu * beta * K
               - 4 * gamma * q2 * beta - zi / 4) / (2 * mu)
    vx_sin2 = (D2 / a2 - zeta / 4 * (3 * q2 + xi / (2 * mu) + 4 * s1
                                     - 4 * beta * (xi / (4 * mu + r) + 2))
               + 4 * gamma * q2 * beta
               - zi * (beta * sqrt(2 * mu) / (sqrt(xi) + sqrt(2 * mu)) - 0.25)) / (4 * q0 * mu)
    dxv1 = D1 + K - zeta / mu + (2 * zeta + gamma * q2) / (2 * mu)
    mixed = (zi * q2 - zeta * q2 * (s1 + 1) + 4 * zeta * q2 * beta - gamma * q0**4
             - (4 * mu * q2 + xi) * dxv1) / mu
    return SecondOrderBoundary(vy_const=vy_const, vy_cos2=vy_cos2, dyvy_const=dy_const,
                               dyvy_cos2=dy_cos2, vx_sin2=vx_sin2,
                               div_w_cos2=D2 / (2 * mu * a2),
                               dxx_wy_plus_dxy_wx_cos2=mixed)


# -- explicit fields ---------------------------------------------------------

def p21_field(q0: float, b: float = 0.0) -> VectorField:
    """p^(21): the part of p^(2) forced by the first order (base wavenumber q0)."""
    s1 = sqrt(q0 * q0 + 1.0)
    r4 = sqrt(4 * q0 * q0 + 1.0)
    px = ExpTrigField.term(q0, -q0 * s1 / 2, r4, 2, "s")
    py = ExpTrigField.term(q0, (q0 * q0 + 2 * s1 - 1) / 4, r4, 2, "c")
    py.add_term((2 * s1 - q0 * q0 - 1) / 4, 1.0, 0, "c")
    py.add_term(b, 1.0, 0, "c", m=1)
    return VectorField(px, py)


def p22_field(q0: float, beta: float) -> VectorField:
    """p^(22) for rho^(2) = beta cos(2 q0 x)."""
    r4 = sqrt(4 * q0 * q0 + 1.0)
    return VectorField(ExpTrigField.term(q0, 2 * beta * q0, r4, 2, "s"),
                       ExpTrigField.term(q0, -beta, r4, 2, "c"))


def v21_field(q0: float, p: ModelParams, so: SecondOrder) -> VectorField:
    """Explicit v^(21) assembled from the B table and E, F, G."""
    s1, r4, a2, c2 = _roots(q0, p)
    B = so.B
    s = sqrt(p.xi / (2 * p.mu))
    vx = ExpTrigField(q0)
    vy = ExpTrigField(q0)
    for coef, k in ((B["Bx1"], r4), (B["Bx2"], 1 + r4), (B["Bx3"], 2 * s1),
                    (-2 * so.E * q0, a2), (-so.F * c2, c2)):
        vx.add_term(coef, k, 2, "s")
    for coef, k in ((B["By1"], r4), (B["By2"], 1 + r4), (B["By3"], 2 * s1),
                    (so.E * a2, a2), (2 * q0 * so.F, c2)):
        vy.add_term(coef, k, 2, "c")
    for coef, k, m in ((B["By4"], 1.0, 0), (B["By5"], 1.0, 1), (B["By6"], 2.0, 0),
                       (B["By7"], 2.0, 1), (B["By8"], 2 * s1, 0), (B["By9"], s, 1), (so.G, s, 0)):
        vy.add_term(coef, k, 0, "c", m=m)
    return VectorField(vx, vy)


def kinematic_residual(q0: float, p: ModelParams, b: float = 0.0,
                   eps_res: float = DEFAULT_EPS_RES) -> dict:
    """Fourier coefficients of the order-alpha^2 kinematic condition's residual.

    With rho^(1) = cos q0x and rho^(2) = beta cos 2q0x the condition reads

        v_y^(2) + V'(0) rho^(2) = -V''(0)/2 (rho^(1))^2 + v_x^(1) (rho^(1))'
                                   - d_y v_y^(1) rho^(1) + V^(2)

    on y = 0, with v_y^(22) + V'(0) rho^(2) = Lambda(2q0) rho^(2) and
    V^(2) = V21 - b V0 (V21 from the explicit b-free equality).  The first-order
    data are read off the field-algebra solution, v^(21) off the B table.
    Returns the constant and cos 2q0x coefficients and a magnitude scale.
    """
    from .mode_fields import first_order_solved

    so = second_order_coeffs(q0, p, b, eps_res)
    vy21 = v21_field(q0, p, so).y.at_y0()
    v1 = first_order_solved(q0, p)
    ax = v1.x.at_y0().coefficient(1, "s")
    d = v1.y.dy().at_y0().coefficient(1, "c")
    K = flat_curvature_closed(p)
    V2 = so.V21_alt - b * flat_speed(p)
    lhs_c = vy21.coefficient(0, "c")
    lhs_2 = vy21.coefficient(2, "c") + so.lambda_2q0 * so.beta
    # cos^2 = (1 + cos 2x)/2 and sin^2 = (1 - cos 2x)/2
    rhs_c = -K / 4 - q0 * ax / 2 - d / 2 + V2
    rhs_2 = -K / 4 + q0 * ax / 2 - d / 2
    scale = max(abs(lhs_c), abs(rhs_c), abs(lhs_2), abs(rhs_2), abs(V2))
    return {"const": lhs_c - rhs_c, "cos2": lhs_2 - rhs_2, "scale": scale}
