"""Exponential-trigonometric field algebra.

An :class:`ExpTrigField` is a finite sum of terms

    c * y**m * exp(k*y) * cos(n*q*x)      or      c * y**m * exp(k*y) * sin(n*q*x)

with a common base wavenumber ``q``.  Every perturbation field in the
expansion cascade has this form, so derivatives, products, restriction to
the line ``y = 0`` and particular solutions of the constant-coefficient
operators can all be carried out exactly on the term list.  A function of
``x`` alone (boundary datum) is the special case ``k = m = 0``.

:class:`VectorField` pairs two scalar fields as (x, y) components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ResonanceError, SolveError

# rates closer than this are treated as the same exponential
_RATE_DIGITS = 10
# coefficients below this (relative to the largest) are dropped after products
_DROP_REL = 1e-15


def _rkey(k: float) -> int:
    return int(round(k * 10**_RATE_DIGITS))


class ExpTrigField:
    """Finite sum of ``coef * y^m e^{k y} trig(n q x)`` terms.

    Internally a dict maps ``(n, kind, rate_key, m) -> [k, coef]`` where
    ``kind`` is ``"c"`` (cosine) or ``"s"`` (sine) and ``n >= 0``.
    """

    __slots__ = ("q", "terms")

    def __init__(self, q: float, terms: dict | None = None):
        self.q = float(q)
        self.terms: dict = {} if terms is None else terms

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, q: float) -> "ExpTrigField":
        return cls(q)

    @classmethod
    def term(cls, q: float, coef: float, k: float = 0.0, n: int = 0,
             kind: str = "c", m: int = 0) -> "ExpTrigField":
        f = cls(q)
        f.add_term(coef, k, n, kind, m)
        return f

    @classmethod
    def constant(cls, q: float, value: float) -> "ExpTrigField":
        return cls.term(q, value)

    def add_term(self, coef: float, k: float = 0.0, n: int = 0, kind: str = "c", m: int = 0):
        """Accumulate one term in place, normalising negative harmonics."""
        if coef == 0.0:
            return self
        if kind not in ("c", "s"):
            raise ValueError(f"kind must be 'c' or 's', got {kind!r}")
        if n < 0:
            n = -n
            if kind == "s":
                coef = -coef
        if n == 0 and kind == "s":
            return self
        key = (n, kind, _rkey(k), m)
        slot = self.terms.get(key)
        if slot is None:
            self.terms[key] = [float(k), float(coef)]
        else:
            slot[1] += coef
        return self

    def copy(self) -> "ExpTrigField":
        return ExpTrigField(self.q, {key: list(v) for key, v in self.terms.items()})

    def iter_terms(self):
        """Yield ``(coef, k, n, kind, m)`` tuples."""
        for (n, kind, _, m), (k, c) in self.terms.items():
            yield c, k, n, kind, m

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = [f"{c:+.6g}*y^{m}*e^({k:.6g}y)*{'cos' if kind == 'c' else 'sin'}({n}qx)"
                 for c, k, n, kind, m in self.iter_terms()]
        return f"ExpTrigField(q={self.q:.6g}, " + (" ".join(parts) or "0") + ")"

    # -- linear structure -----------------------------------------------
    def _check_q(self, other: "ExpTrigField"):
        if abs(self.q - other.q) > 1e-14 * max(1.0, abs(self.q)):
            raise ValueError("fields have different base wavenumbers")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = ExpTrigField.constant(self.q, float(other))
        self._check_q(other)
        out = self.copy()
        for c, k, n, kind, m in other.iter_terms():
            out.add_term(c, k, n, kind, m)
        return out

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExpTrigField) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpTrigField):
            return self.product(other)
        s = float(other)
        return ExpTrigField(self.q, {key: [v[0], v[1] * s] for key, v in self.terms.items()
                                     if v[1] * s != 0.0})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / float(other))

    def product(self, other: "ExpTrigField") -> "ExpTrigField":
        """Pointwise product using the trigonometric product identities."""
        self._check_q(other)
        out = ExpTrigField(self.q)
        for c1, k1, n1, t1, m1 in self.iter_terms():
            for c2, k2, n2, t2, m2 in other.iter_terms():
                c = 0.5 * c1 * c2
                k, m = k1 + k2, m1 + m2
                if t1 == "c" and t2 == "c":
                    out.add_term(c, k, n1 - n2, "c", m)
                    out.add_term(c, k, n1 + n2, "c", m)
                elif t1 == "s" and t2 == "s":
                    out.add_term(c, k, n1 - n2, "c", m)
                    out.add_term(-c, k, n1 + n2, "c", m)
                elif t1 == "s":  # sin(a) cos(b)
                    out.add_term(c, k, n1 + n2, "s", m)
                    out.add_term(c, k, n1 - n2, "s", m)
                else:  # cos(a) sin(b)
                    out.add_term(c, k, n2 + n1, "s", m)
                    out.add_term(c, k, n2 - n1, "s", m)
        return out.pruned()

    def pruned(self, rel: float = _DROP_REL) -> "ExpTrigField":
        """Drop cancelled terms (|coef| below rel * largest)."""
        if not self.terms:
            return self
        big = max(abs(v[1]) for v in self.terms.values())
        cut = rel * big
        self.terms = {key: v for key, v in self.terms.items() if abs(v[1]) > cut}
        return self

    def power(self, j: int) -> "ExpTrigField":
        out = ExpTrigField.constant(self.q, 1.0)
        for _ in range(j):
            out = out.product(self)
        return out

    # -- calculus -------------------------------------------------------
    def dx(self) -> "ExpTrigField":
        out = ExpTrigField(self.q)
        for c, k, n, kind, m in self.iter_terms():
            if n == 0:
                continue
            w = n * self.q
            if kind == "c":
                out.add_term(-w * c, k, n, "s", m)
            else:
                out.add_term(w * c, k, n, "c", m)
        return out

    def dy(self) -> "ExpTrigField":
        out = ExpTrigField(self.q)
        for c, k, n, kind, m in self.iter_terms():
            out.add_term(k * c, k, n, kind, m)
            if m > 0:
                out.add_term(m * c, k, n, kind, m - 1)
        return out

    def d(self, nx: int = 0, ny: int = 0) -> "ExpTrigField":
        f = self
        for _ in range(nx):
            f = f.dx()
        for _ in range(ny):
            f = f.dy()
        return f

    def laplacian(self) -> "ExpTrigField":
        return self.dx().dx() + self.dy().dy()

    def at_y0(self) -> "ExpTrigField":
        """Restrict to the line y = 0 (a pure function of x)."""
        out = ExpTrigField(self.q)
        for c, k, n, kind, m in self.iter_terms():
            if m == 0:
                out.add_term(c, 0.0, n, kind, 0)
        return out

    # -- queries --------------------------------------------------------
    def is_boundary(self) -> bool:
        return all(m == 0 and k == 0.0 for _, k, _, _, m in self.iter_terms())

    def coefficient(self, n: int, kind: str = "c") -> float:
        """Fourier coefficient of a boundary function (sum over k=0, m=0 terms)."""
        if n == 0 and kind == "s":
            return 0.0
        return sum(c for c, k, nn, kk, m in self.iter_terms()
                   if nn == n and kk == kind and m == 0 and k == 0.0)

    def rates(self) -> set:
        return {round(k, 12) for _, k, _, _, _ in self.iter_terms()}

    def harmonics(self) -> set:
        return {(n, kind) for _, _, n, kind, _ in self.iter_terms()}

    def scale(self) -> float:
        """Largest absolute coefficient (0 for the zero field)."""
        return max((abs(v[1]) for v in self.terms.values()), default=0.0)

    def __call__(self, x, y=0.0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape)
        for c, k, n, kind, m in self.iter_terms():
            trig = np.cos(n * self.q * x) if kind == "c" else np.sin(n * self.q * x)
            val = c * np.exp(k * y) * trig
            if m:
                val = val * y**m
            out += val
        return out if out.ndim else float(out)

    def filter(self, n: int | None = None, kind: str | None = None) -> "ExpTrigField":
        out = ExpTrigField(self.q)
        for c, k, nn, kk, m in self.iter_terms():
            if (n is None or nn == n) and (kind is None or kk == kind):
                out.add_term(c, k, nn, kk, m)
        return out

    def max_y_power(self) -> int:
        return max((m for _, _, _, _, m in self.iter_terms()), default=0)


@dataclass
class VectorField:
    """Two-component field (x, y) built from :class:`ExpTrigField` parts."""

    x: ExpTrigField
    y: ExpTrigField

    @classmethod
    def zero(cls, q: float) -> "VectorField":
        return cls(ExpTrigField(q), ExpTrigField(q))

    @property
    def q(self) -> float:
        return self.x.q

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return VectorField(-self.x, -self.y)

    def __mul__(self, s: float) -> "VectorField":
        return VectorField(self.x * s, self.y * s)

    __rmul__ = __mul__

    def copy(self) -> "VectorField":
        return VectorField(self.x.copy(), self.y.copy())

    def div(self) -> ExpTrigField:
        return self.x.dx() + self.y.dy()

    def laplacian(self) -> "VectorField":
        return VectorField(self.x.laplacian(), self.y.laplacian())

    def grad_div(self) -> "VectorField":
        d = self.div()
        return VectorField(d.dx(), d.dy())

    def at_y0(self) -> "VectorField":
        return VectorField(self.x.at_y0(), self.y.at_y0())

    def __call__(self, x, y=0.0):
        return self.x(x, y), self.y(x, y)

    def __len__(self):
        return len(self.x) + len(self.y)


def stokes_friction(v: VectorField, mu: float, xi: float) -> VectorField:
    """Apply ``mu (Laplace v + grad div v) - xi v``."""
    gd = v.grad_div()
    lap = v.laplacian()
    return VectorField(mu * (lap.x + gd.x) - xi * v.x, mu * (lap.y + gd.y) - xi * v.y)


def tensor_div(a: VectorField, b: VectorField) -> VectorField:
    """Divergence of the dyad ``a (x) b``: component i is d_j (a_i b_j)."""
    axbx = a.x.product(b.x)
    axby = a.x.product(b.y)
    aybx = a.y.product(b.x)
    ayby = a.y.product(b.y)
    return VectorField(axbx.dx() + axby.dy(), aybx.dx() + ayby.dy())


def shear_traction(v: VectorField, mu: float) -> ExpTrigField:
    """``mu (d_x v_y + d_y v_x)`` as a bulk field."""
    return (v.y.dx() + v.x.dy()) * mu


def normal_traction(v: VectorField, mu: float) -> ExpTrigField:
    """``2 mu d_y v_y`` as a bulk field."""
    return v.y.dy() * (2.0 * mu)


# ---------------------------------------------------------------------------
# particular solutions
# ---------------------------------------------------------------------------

def _poly_groups(f: ExpTrigField, key_fn):
    """Group terms by key_fn(n, kind) and rate; returns {(gkey, rkey): (k, {m: coef})}."""
    groups: dict = {}
    for (n, kind, rk, m), (k, c) in f.terms.items():
        g = key_fn(n, kind)
        slot = groups.setdefault((g, rk), [k, {}])
        slot[1][m] = slot[1].get(m, 0.0) + c
    return groups


def _dmat(k: float, size: int) -> np.ndarray:
    """Matrix of d/dy acting on P(y) e^{ky} in the monomial basis of P."""
    d = k * np.eye(size)
    for j in range(1, size):
        d[j - 1, j] = j
    return d


def solve_screened(f: ExpTrigField, s2: float = 1.0) -> ExpTrigField:
    """Particular solution u of ``Laplace u - s2 u = f`` in term form.

    Resonant exponentials (k^2 = n^2 q^2 + s2) are handled by raising the
    polynomial degree, which yields the usual ``y e^{ky}`` solutions.
    """
    out = ExpTrigField(f.q)
    groups = _poly_groups(f, lambda n, kind: (n, kind))
    for ((n, kind), _), (k, poly) in groups.items():
        M = max(poly)
        size = M + 2
        F = np.zeros(size)
        for m, c in poly.items():
            F[m] = c
        d = _dmat(k, size)
        A = d @ d - ((n * f.q) ** 2 + s2) * np.eye(size)
        coef = _lstsq_checked(A, F, f"screened n={n} k={k:.6g}")
        for m, c in enumerate(coef):
            out.add_term(c, k, n, kind, m)
    return out.pruned()


def _lstsq_checked(A: np.ndarray, F: np.ndarray, what: str) -> np.ndarray:
    scale = np.abs(A).max() if A.size else 1.0
    sol, *_ = np.linalg.lstsq(A, F, rcond=1e-13)
    res = np.abs(A @ sol - F).max()
    if res > 1e-9 * max(np.abs(F).max(), 1e-300) and res > 1e-300:
        raise SolveError(f"no particular solution of polynomial-exponential type ({what}); "
                         f"residual {res:.3e}, matrix scale {scale:.3e}")
    return sol


def _vector_class(comp: str, kind: str) -> int:
    """+1 for the (v_x sin, v_y cos) class, -1 for (v_x cos, v_y sin)."""
    if comp == "x":
        return 1 if kind == "s" else -1
    return 1 if kind == "c" else -1


def solve_stokes_friction(f: VectorField, mu: float, xi: float) -> VectorField:
    """Particular solution v of ``mu (Laplace v + grad div v) - xi v = f``.

    Each (harmonic, parity class, rate) group is solved by undetermined
    coefficients on ``P(y) e^{ky}`` with one extra polynomial degree, which
    covers simple resonance with the homogeneous rates
    ``sqrt(n^2q^2 + xi/2mu)`` and ``sqrt(n^2q^2 + xi/mu)``.
    """
    q = f.q
    groups: dict = {}
    for comp, fld in (("x", f.x), ("y", f.y)):
        for (n, kind, rk, m), (k, c) in fld.terms.items():
            cls_ = _vector_class(comp, kind)
            slot = groups.setdefault((n, cls_, rk), [k, {}, {}])
            target = slot[1] if comp == "x" else slot[2]
            target[m] = target.get(m, 0.0) + c
    out = VectorField.zero(q)
    for (n, cls_, _), (k, px, py) in groups.items():
        M = max(list(px) + list(py))
        size = M + 2
        Fx = np.zeros(size)
        Fy = np.zeros(size)
        for m, c in px.items():
            Fx[m] = c
        for m, c in py.items():
            Fy[m] = c
        kap = cls_ * n * q
        d = _dmat(k, size)
        eye = np.eye(size)
        A = np.block([
            [mu * (d @ d - 2 * kap**2 * eye) - xi * eye, -mu * kap * d],
            [mu * kap * d, mu * (2 * d @ d - kap**2 * eye) - xi * eye],
        ])
        sol = _lstsq_checked(A, np.concatenate([Fx, Fy]), f"stokes n={n} k={k:.6g}")
        U, W = sol[:size], sol[size:]
        xkind = "s" if cls_ == 1 else "c"
        ykind = "c" if cls_ == 1 else "s"
        for m in range(size):
            out.x.add_term(U[m], k, n, xkind, m)
            out.y.add_term(W[m], k, n, ykind, m)
    out.x.pruned()
    out.y.pruned()
    return out


# ---------------------------------------------------------------------------
# homogeneous solutions and boundary fitting
# ---------------------------------------------------------------------------

def screened_rate(n: int, q: float, s2: float = 1.0) -> float:
    return math.sqrt((n * q) ** 2 + s2)


def fit_screened(target: ExpTrigField, s2: float = 1.0) -> ExpTrigField:
    """Decaying solution of ``Laplace u = s2 u`` with ``u(x, 0) = target(x)``."""
    if not target.is_boundary():
        raise ValueError("target must be a boundary function")
    out = ExpTrigField(target.q)
    for c, _, n, kind, _ in target.iter_terms():
        out.add_term(c, screened_rate(n, target.q, s2), n, kind, 0)
    return out


def stokes_rates(n: int, q: float, mu: float, xi: float) -> tuple[float, float]:
    """Decay rates (longitudinal, transverse) of the homogeneous solutions."""
    kap2 = (n * q) ** 2
    return math.sqrt(kap2 + xi / (2.0 * mu)), math.sqrt(kap2 + xi / mu)


def stokes_homogeneous(n: int, cls_: int, q: float, mu: float, xi: float) -> tuple[VectorField, VectorField]:
    """Basis of decaying homogeneous solutions for harmonic n and parity class.

    Class +1: grad(e^{ay} cos) and curl(e^{cy} sin); class -1 swaps cos/sin.
    For n = 0 only one solution per class exists; the other entry is zero.
    """
    a, c = stokes_rates(n, q, mu, xi)
    kap = n * q
    z = VectorField.zero(q)
    if n == 0:
        if cls_ == 1:
            return VectorField(ExpTrigField(q), ExpTrigField.term(q, 1.0, a)), z
        return VectorField(ExpTrigField.term(q, 1.0, c), ExpTrigField(q)), z
    if cls_ == 1:
        h1 = VectorField(ExpTrigField.term(q, -kap, a, n, "s"), ExpTrigField.term(q, a, a, n, "c"))
        h2 = VectorField(ExpTrigField.term(q, c, c, n, "s"), ExpTrigField.term(q, -kap, c, n, "c"))
    else:
        h1 = VectorField(ExpTrigField.term(q, kap, a, n, "c"), ExpTrigField.term(q, a, a, n, "s"))
        h2 = VectorField(ExpTrigField.term(q, c, c, n, "c"), ExpTrigField.term(q, kap, c, n, "s"))
    return h1, h2


def fit_stokes(shear: ExpTrigField, normal: ExpTrigField, mu: float, xi: float) -> VectorField:
    """Decaying homogeneous field with prescribed boundary tractions.

    Returns v with ``mu (d_x v_y + d_y v_x) = shear`` and
    ``2 mu d_y v_y = normal`` on y = 0.
    """
    q = shear.q
    wanted = {}
    for c, _, n, kind, _ in shear.iter_terms():
        wanted.setdefault((n, _vector_class("x", kind)), None)
    for c, _, n, kind, _ in normal.iter_terms():
        wanted.setdefault((n, _vector_class("y", kind)), None)
    out = VectorField.zero(q)
    for n, cls_ in wanted:
        xkind = "s" if cls_ == 1 else "c"
        ykind = "c" if cls_ == 1 else "s"
        sx = shear.coefficient(n, xkind)
        sy = normal.coefficient(n, ykind)
        h1, h2 = stokes_homogeneous(n, cls_, q, mu, xi)
        basis = [h for h in (h1, h2) if len(h)]
        cols = []
        for h in basis:
            cols.append([shear_traction(h, mu).at_y0().coefficient(n, xkind),
                         normal_traction(h, mu).at_y0().coefficient(n, ykind)])
        A = np.array(cols).T
        rhs = np.array([sx, sy])
        if n == 0:
            # one unknown; the other row must be satisfied identically
            row = 1 if cls_ == 1 else 0
            if abs(rhs[1 - row]) > 1e-12 * max(1.0, abs(rhs[row])):
                raise SolveError(f"inconsistent n=0 traction data ({rhs})")
            if A[row, 0] == 0.0:
                raise ResonanceError("homogeneous n=0 traction")
            w = [rhs[row] / A[row, 0]]
        else:
            det = np.linalg.det(A)
            if abs(det) <= 1e-13 * np.abs(A).max() ** 2:
                raise ResonanceError(f"traction matrix for harmonic {n}")
            w = np.linalg.solve(A, rhs)
        for wi, h in zip(w, basis):
            out = out + h * float(wi)
    return out


def boundary(q: float, coeffs: Iterable[tuple[float, int, str]]) -> ExpTrigField:
    """Convenience constructor for a function of x: [(coef, n, kind), ...]."""
    f = ExpTrigField(q)
    for c, n, kind in coeffs:
        f.add_term(c, 0.0, n, kind, 0)
    return f
