"""Order-by-order solution of the rescaled free-boundary problem.

This is an independent route to the expansion coefficients.  Instead of
transcribing the closed-form tables, it expands the rescaled bulk
equations, the boundary conditions on ``y = rho(x)`` and the kinematic
condition directly in powers of the amplitude ``alpha`` and solves each
order on the exponential-trigonometric field algebra:

* bulk:  Laplace p = theta^2 p,
  mu (Laplace v + grad div v) - zeta div(p p) - theta^2 xi v + theta zeta_i p = 0
* on y = rho:  p = n,  mu S n = (zeta + gamma kappa_t / theta) n,
  with S = grad v + grad v^T and kappa_t = rho'' (1 + rho'^2)^(-3/2)
* kinematic:  v_y - v_x rho' = C_rho

where theta = 1 + b alpha^2.  Boundary data at each order are the
``alpha^n`` part of the Taylor expansion of the boundary expressions about
``y = 0`` computed with the order-n unknowns set to their particular part.

The three quantities the closed forms predict (Lambda(q), beta and V2 at
second order, and b at third order) are read off the Fourier coefficients
of the kinematic residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import SolveError
from ..fields import (ExpTrigField, VectorField, fit_screened, fit_stokes,
                      solve_screened, solve_stokes_friction, tensor_div)
from ..params import ModelParams

ORDER_MAX = 3


# -- truncated power series in alpha whose coefficients are functions of x --

def _szero(q, N):
    return [ExpTrigField(q) for _ in range(N + 1)]


def _smul(a, b, N):
    q = a[0].q
    out = _szero(q, N)
    for i, ai in enumerate(a):
        if not len(ai):
            continue
        for j in range(N + 1 - i):
            if len(b[j]):
                out[i + j] = out[i + j] + ai.product(b[j])
    return out


def _sadd(a, b):
    return [x + y for x, y in zip(a, b)]


def _sscale(a, s):
    return [x * s for x in a]


def _sconst(q, N, c):
    out = _szero(q, N)
    out[0] = ExpTrigField.constant(q, c)
    return out


def _sbinom(s, expo, N):
    """(1 + s)^expo for a series s with vanishing constant term."""
    q = s[0].q
    out = _sconst(q, N, 1.0)
    powj = _sconst(q, N, 1.0)
    coef = 1.0
    for j in range(1, N + 1):
        powj = _smul(powj, s, N)
        coef *= (expo - (j - 1)) / j
        out = _sadd(out, _sscale(powj, coef))
    return out


def _sdx(a):
    return [x.dx() for x in a]


@dataclass
class CascadeState:
    """Fields and boundary shape accumulated up to some order."""

    q: float
    b: float
    rho: list
    p: list = field(default_factory=list)
    v: list = field(default_factory=list)
    kinematic: list = field(default_factory=list)


class ExpansionCascade:
    """Solve the amplitude expansion order by order for a given ``b``.

    Parameters
    ----------
    params : ModelParams
    q : float
        Base wavenumber; rho^(1) = cos(q x).
    b : float
        Period-correction coefficient used in theta = 1 + b alpha^2.
    """

    def __init__(self, params: ModelParams, q: float, b: float = 0.0):
        self.params = params
        self.q = float(q)
        self.b = float(b)
        N = ORDER_MAX
        self.N = N
        rho = _szero(self.q, N)
        rho[1] = ExpTrigField.term(self.q, 1.0, 0.0, 1, "c")
        self.state = CascadeState(self.q, self.b, rho)

    # -- boundary expansions ------------------------------------------
    def _restrict(self, flds, skip=None):
        """Series of f(x, rho(x)) given bulk fields f[i] (i-th order)."""
        N, q = self.N, self.q
        rho = self.state.rho
        pows = [_sconst(q, N, 1.0)]
        for _ in range(N):
            pows.append(_smul(pows[-1], rho, N))
        out = _szero(q, N)
        for i, f in enumerate(flds):
            if f is None or not len(f):
                continue
            g = f
            for j in range(0, N + 1 - i):
                if j > 0:
                    g = g.dy()
                g0 = g.at_y0()
                if not len(g0):
                    continue
                fact = 1.0 / math.factorial(j)
                for n in range(j, N + 1 - i):
                    if len(pows[j][n]):
                        out[i + n] = out[i + n] + g0.product(pows[j][n]) * fact
        return out

    def _normal(self):
        N = self.N
        rp = _sdx(self.state.rho)
        inv = _sbinom(_smul(rp, rp, N), -0.5, N)
        nx = _sscale(_smul(rp, inv, N), -1.0)
        return nx, inv, rp

    def _curvature_term(self):
        """zeta + gamma kappa_t / theta as a series."""
        N, q, P = self.N, self.q, self.params
        rp = _sdx(self.state.rho)
        rpp = _sdx(rp)
        w = _sbinom(_smul(rp, rp, N), -1.5, N)
        kap = _smul(rpp, w, N)
        inv_theta = _sconst(q, N, 1.0)
        if N >= 2:
            inv_theta[2] = ExpTrigField.constant(q, -self.b)
        out = _sscale(_smul(kap, inv_theta, N), P.gamma)
        out[0] = out[0] + P.zeta
        return out

    def _p_bc(self):
        nx, ny, _ = self._normal()
        px = self._restrict([f.x for f in self.state.p])
        py = self._restrict([f.y for f in self.state.p])
        return _sadd(px, _sscale(nx, -1.0)), _sadd(py, _sscale(ny, -1.0))

    def _stress_bc(self):
        P = self.params
        mu = P.mu
        v = self.state.v
        sxx = self._restrict([f.x.dx() * 2.0 for f in v])
        sxy = self._restrict([f.x.dy() + f.y.dx() for f in v])
        syy = self._restrict([f.y.dy() * 2.0 for f in v])
        rp = _sdx(self.state.rho)
        t = self._curvature_term()
        N = self.N
        ex = _sadd(_sscale(_sadd(_sscale(_smul(rp, sxx, N), -1.0), sxy), mu), _smul(rp, t, N))
        ey = _sadd(_sscale(_sadd(_sscale(_smul(rp, sxy, N), -1.0), syy), mu), _sscale(t, -1.0))
        return ex, ey

    def _kinematic(self):
        v = self.state.v
        vy = self._restrict([f.y for f in v])
        vx = self._restrict([f.x for f in v])
        rp = _sdx(self.state.rho)
        return _sadd(vy, _sscale(_smul(vx, rp, self.N), -1.0))

    # -- order solves ---------------------------------------------------
    def solve_order(self, n: int, rho_n: ExpTrigField | None = None) -> ExpTrigField:
        """Solve order n (requires orders < n) and return the kinematic datum.

        ``rho_n`` fixes the order-n boundary shape (default: unchanged; for
        n = 1 it is cos(q x)).
        """
        P = self.params
        st = self.state
        q = self.q
        if len(st.p) != n:
            raise SolveError(f"order {n} requested but {len(st.p)} orders are solved")
        if rho_n is not None and n >= 1:
            st.rho[n] = rho_n
        b = self.b
        # polarity
        fx = ExpTrigField(q)
        fy = ExpTrigField(q)
        if n >= 2:
            fx = st.p[n - 2].x * (2 * b)
            fy = st.p[n - 2].y * (2 * b)
        pn = VectorField(solve_screened(fx), solve_screened(fy))
        st.p.append(pn)
        ex, ey = self._p_bc()
        pn = pn + VectorField(fit_screened(-ex[n]), fit_screened(-ey[n]))
        st.p[n] = pn
        # velocity
        force = VectorField.zero(q)
        for i in range(n + 1):
            force = force + tensor_div(st.p[i], st.p[n - i]) * P.zeta
        force = force - pn * P.zeta_i
        if n >= 2:
            force = force + st.v[n - 2] * (2 * b * P.xi) - st.p[n - 2] * (b * P.zeta_i)
        vn = solve_stokes_friction(force, P.mu, P.xi)
        st.v.append(vn)
        sx, sy = self._stress_bc()
        vn = vn + fit_stokes(-sx[n], -sy[n], P.mu, P.xi)
        st.v[n] = vn
        kin = self._kinematic()[n]
        st.kinematic.append(kin)
        return kin

    def residuals(self, n: int) -> dict:
        """Max |coefficient| of every order-n boundary condition after solving."""
        ex, ey = self._p_bc()
        sx, sy = self._stress_bc()
        return {"p_x": ex[n].scale(), "p_y": ey[n].scale(),
                "shear": sx[n].scale(), "normal": sy[n].scale()}


@dataclass(frozen=True)
class CascadeResult:
    """Numbers extracted from the independent cascade."""

    q0: float
    V0: float
    lambda_q0: float
    lambda_2q0: float
    beta: float
    V21: float
    k1: float
    k2: float
    b: float


def growth_rate_cascade(params: ModelParams, q: float) -> float:
    """Lambda(q) from the first-order kinematic datum (theta = 1)."""
    c = ExpansionCascade(params, q, 0.0)
    c.solve_order(0)
    kin = c.solve_order(1)
    return kin.coefficient(1, "c")


def _run_to_second(params, q0, b):
    c = ExpansionCascade(params, q0, b)
    c.solve_order(0)
    c.solve_order(1)
    return c


def second_order_data(params: ModelParams, q0: float, b: float = 0.0):
    """Return (beta, V2, Lambda(2 q0), cascade) at second order for given b."""
    base = _run_to_second(params, q0, b)
    snap = (list(base.state.p), list(base.state.v), list(base.state.kinematic), list(base.state.rho))
    k0 = base.solve_order(2, ExpTrigField(q0))
    c0 = k0.coefficient(2, "c")
    # response to rho2 = cos 2 q0 x gives Lambda(2 q0)
    probe = _run_to_second(params, q0, b)
    k1 = probe.solve_order(2, ExpTrigField.term(q0, 1.0, 0.0, 2, "c"))
    lam2 = k1.coefficient(2, "c") - c0
    beta = -c0 / lam2
    full = ExpansionCascade(params, q0, b)
    full.state.p, full.state.v, full.state.kinematic, full.state.rho = (
        list(snap[0]), list(snap[1]), list(snap[2]), list(snap[3]))
    k2 = full.solve_order(2, ExpTrigField.term(q0, beta, 0.0, 2, "c"))
    V2 = k2.coefficient(0, "c")
    return beta, V2, lam2, full


def third_order_cos_coefficient(params: ModelParams, q0: float, b: float) -> float:
    _, _, _, c = second_order_data(params, q0, b)
    kin = c.solve_order(3, ExpTrigField(q0))
    return kin.coefficient(1, "c")


def cascade_bifurcation(params: ModelParams, q0: float) -> CascadeResult:
    """Run the cascade for b = 0 and b = 1 and solve k1 b + k2 = 0."""
    from ..flat_front import flat_speed

    lam1 = growth_rate_cascade(params, q0)
    beta, V2_0, lam2, _ = second_order_data(params, q0, 0.0)
    k2 = third_order_cos_coefficient(params, q0, 0.0)
    k1 = third_order_cos_coefficient(params, q0, 1.0) - k2
    return CascadeResult(q0=q0, V0=flat_speed(params), lambda_q0=lam1, lambda_2q0=lam2,
                         beta=beta, V21=V2_0, k1=k1, k2=k2, b=-k2 / k1)
