"""Analytic residuals of exponential-trigonometric fields.

Each registered equation id turns a candidate field (plus whatever data the
equation needs) into a list of :class:`Piece` objects, one per scalar
equation: the bulk components and the boundary conditions on ``y = 0``.
Derivatives are exact (term-wise on the :class:`ExpTrigField`
representation); only the final comparison samples points.

Registered ids:

``homogeneous_stokes``   mu (Laplace v + grad div v) - xi v = 0
``screened``             Laplace p = p
``p21``                  Laplace p = p + 2 b P and its y = 0 data (``b``)
``p311``                 Laplace p = p with the p^(311) boundary data (``beta``)
``split_t|c|s``          the three first-order split problems
``v1``                   full first-order velocity problem
``v21``                  v^(21) problem and its tractions (``so``: SecondOrder)
``v311``                 v^(311) problem with the H forcing and Q, R tractions
                         (``H``, ``Q``, ``R``)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UnknownEquationError
from ..fields import ExpTrigField, VectorField, stokes_friction, tensor_div
from ..flat_front import flat_curvature_closed, velocity_terms
from ..params import ModelParams


@dataclass(frozen=True)
class Piece:
    """One scalar equation lhs = rhs, either in the bulk or on y = 0."""

    name: str
    lhs: ExpTrigField
    rhs: ExpTrigField
    boundary: bool = False
    terms: tuple = ()         # individual contributions, used only for the scale


@dataclass(frozen=True)
class ResidualReport:
    """Worst relative residual over the sample points."""

    equation_id: str
    max_rel_residual: float
    worst_point: tuple
    worst_piece: str
    pieces: tuple = ()        # ((name, rel_residual), ...)

    def passed(self, tol: float = 1e-8) -> bool:
        return self.max_rel_residual <= tol


def default_samples(q: float, depth: float = 5.0, n: int = 5):
    """5 x 5 lattice on [0, 2 pi/q] x [-depth, 0] and the boundary line."""
    xs = np.linspace(0.0, 2 * math.pi / q, n)
    ys = np.linspace(-depth, 0.0, n)
    X, Y = np.meshgrid(xs, ys)
    bulk = np.column_stack([X.ravel(), Y.ravel()])
    line = np.column_stack([np.linspace(0.0, 2 * math.pi / q, 4 * n + 1), np.zeros(4 * n + 1)])
    return bulk, line


# -- shared building blocks --------------------------------------------------

def _cos(q, n=1, coef=1.0):
    return ExpTrigField.term(q, coef, 0.0, n, "c")


def _polarity_base(q):
    """P = (0, e^y)."""
    return VectorField(ExpTrigField(q), ExpTrigField.term(q, 1.0, 1.0, 0, "c"))


def _flat_velocity_field(q, p):
    V = VectorField.zero(q)
    for amp, k in velocity_terms(p):
        V.y.add_term(amp, k, 0, "c")
    return V


def _polarity_first(q):
    s1 = math.sqrt(q * q + 1.0)
    return VectorField(ExpTrigField.term(q, q, s1, 1, "s"), ExpTrigField.term(q, -1.0, s1, 1, "c"))


def _stokes_pieces(v: VectorField, f: VectorField, shear, normal, p: ModelParams):
    L = stokes_friction(v, p.mu, p.xi)
    lap, gd = v.laplacian(), v.grad_div()
    out = [Piece(f"bulk_{c}", getattr(L, c), getattr(f, c),
                 terms=(getattr(lap, c) * p.mu, getattr(gd, c) * p.mu, getattr(v, c) * p.xi))
           for c in ("x", "y")]
    if shear is not None:
        out.append(Piece("shear_bc", ((v.y.dx() + v.x.dy()) * p.mu).at_y0(), shear, True,
                         terms=((v.y.dx() * p.mu).at_y0(), (v.x.dy() * p.mu).at_y0())))
    if normal is not None:
        out.append(Piece("normal_bc", (v.y.dy() * (2 * p.mu)).at_y0(), normal, True))
    return out


def _screened_pieces(u: VectorField, extra: VectorField | None = None):
    rhs = u if extra is None else u + extra
    lap = u.laplacian()
    return [Piece(f"bulk_{c}", getattr(lap, c), getattr(rhs, c), terms=(getattr(u, c),))
            for c in ("x", "y")]


# -- equation builders -------------------------------------------------------

def _eq_homogeneous(v, p, data):
    return _stokes_pieces(v, VectorField.zero(v.q), None, None, p)


def _eq_screened(u, p, data):
    return _screened_pieces(u)


def _eq_p21(u, p, data):
    q, b = u.q, data.get("b", 0.0)
    pieces = _screened_pieces(u, _polarity_base(q) * (2.0 * b))
    rho = _cos(q)
    p1 = _polarity_first(q)
    bx = -(p1.x.dy().at_y0().product(rho))
    # P_y'' = 1 on y = 0
    by = (rho.product(rho) * -0.5 - p1.y.dy().at_y0().product(rho)
          - rho.dx().product(rho.dx()) * 0.5)
    pieces.append(Piece("px_bc", u.x.at_y0(), bx, True))
    pieces.append(Piece("py_bc", u.y.at_y0(), by, True))
    return pieces


def _eq_p311(u, p, data):
    from ..third_order import p311_boundary

    hx, hy = p311_boundary(u.q, data["beta"])
    pieces = _screened_pieces(u)
    pieces.append(Piece("px_bc", u.x.at_y0(), ExpTrigField.term(u.q, hx, 0.0, 1, "s"), True))
    pieces.append(Piece("py_bc", u.y.at_y0(), _cos(u.q, 1, hy), True))
    return pieces


def _split(which):
    def build(v, p, data):
        from ..mode_fields import split_problem

        f, shear, normal = split_problem(which, v.q, p)
        return _stokes_pieces(v, f, shear, normal, p)
    return build


def _eq_v1(v, p, data):
    q = v.q
    P, p1 = _polarity_base(q), _polarity_first(q)
    f = (tensor_div(p1, P) + tensor_div(P, p1)) * p.zeta - p1 * p.zeta_i
    rho = _cos(q)
    shear = rho.dx() * (-p.zeta)
    normal = rho * (-2 * p.mu * flat_curvature_closed(p)) + rho.dx().dx() * p.gamma
    return _stokes_pieces(v, f, shear, normal, p)


def _eq_v21(v, p, data):
    from ..second_order import p21_field

    so = data["so"]
    q, b = v.q, so.b
    P, p1, V = _polarity_base(q), _polarity_first(q), _flat_velocity_field(q, p)
    p21 = p21_field(q, b)
    f = ((tensor_div(p21, P) + tensor_div(P, p21) + tensor_div(p1, p1)) * p.zeta
         + V * (2 * p.xi * b) - p21 * p.zeta_i - P * (p.zeta_i * b))
    T = so.T
    shear = ExpTrigField.term(q, T["Tx"], 0.0, 2, "s")
    normal = ExpTrigField.constant(q, T["Ty1"]) + _cos(q, 2, T["Ty2"])
    return _stokes_pieces(v, f, shear, normal, p)


def _eq_v311(v, p, data):
    H, Q, R = data["H"], data["Q"], data["R"]
    q = v.q
    s1 = math.sqrt(q * q + 1.0)
    r4 = math.sqrt(4 * q * q + 1.0)
    f = VectorField.zero(q)
    for comp, kind in (("x", "s"), ("y", "c")):
        tgt = getattr(f, comp)
        tgt.add_term(-p.zeta_i * H["H1" + comp], s1, 1, kind)
        tgt.add_term(p.zeta * H["H2" + comp], s1 + 1, 1, kind)
        tgt.add_term(p.zeta * H["H3" + comp], s1 + r4, 1, kind)
    shear = ExpTrigField.term(q, Q, 0.0, 1, "s")
    normal = _cos(q, 1, R)
    return _stokes_pieces(v, f, shear, normal, p)


EQUATIONS = {
    "homogeneous_stokes": _eq_homogeneous,
    "screened": _eq_screened,
    "p21": _eq_p21,
    "p311": _eq_p311,
    "split_t": _split("t"),
    "split_c": _split("c"),
    "split_s": _split("s"),
    "v1": _eq_v1,
    "v21": _eq_v21,
    "v311": _eq_v311,
}


def residual(field: VectorField, equation_id: str, p: ModelParams, sample_points=None,
             **data) -> ResidualReport:
    """Evaluate LHS - RHS of ``equation_id`` for ``field`` at sample points.

    ``sample_points`` is a pair (bulk points, boundary-line points), each an
    (n, 2) array of (x, y); the default is :func:`default_samples`.  Each
    piece is normalized by the largest magnitude over its points of LHS, RHS
    and the individual terms making up the LHS.
    """
    try:
        builder = EQUATIONS[equation_id]
    except KeyError:
        raise UnknownEquationError(equation_id) from None
    pieces = builder(field, p, data)
    bulk, line = default_samples(field.q) if sample_points is None else sample_points
    worst, worst_pt, worst_name, per = 0.0, (math.nan, math.nan), "", []
    for pc in pieces:
        pts = line if pc.boundary else bulk
        x, y = pts[:, 0], pts[:, 1]
        lhs, rhs = pc.lhs(x, y), pc.rhs(x, y)
        scale = max([np.max(np.abs(lhs)), np.max(np.abs(rhs))]
                    + [np.max(np.abs(t(x, y))) for t in pc.terms])
        res = np.abs(lhs - rhs)
        rel = float(np.max(res) / scale) if scale > 0 else 0.0
        per.append((pc.name, rel))
        if rel > worst or not worst_name:
            i = int(np.argmax(res))
            worst, worst_pt, worst_name = rel, (float(x[i]), float(y[i])), pc.name
    return ResidualReport(equation_id=equation_id, max_rel_residual=worst, worst_point=worst_pt,
                          worst_piece=worst_name, pieces=tuple(per))
