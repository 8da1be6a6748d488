"""Finite-difference two-point BVP solvers used as independent oracles.

Both solvers discretize ``y in [y_min, 0]`` on a uniform grid with
second-order centred differences, impose the boundary conditions at ``y = 0``
through a ghost node and truncate the decaying solution with a homogeneous
Dirichlet condition at ``y_min``.  The resulting banded systems are solved
directly.

* :func:`solve_flat_front_bvp` - the x-independent velocity V_y(y),
* :func:`solve_mode_bvp` - the linearized Fourier-mode system for
  (v_x, v_y)(y) e^{iqx}, returning the growth rate zeta/(2mu) + v_y(0).

:func:`richardson` combines two grid levels when the O(h^2) error has to be
pushed below the tolerance of a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve

from ..errors import SolveError
from ..params import ModelParams


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid y_j = y_min + j h, j = 0..n-1, with y_{n-1} = 0."""

    y_min: float
    n: int = 4000

    def __post_init__(self):
        if self.n < 200:
            raise ValueError(f"grid needs at least 200 nodes (got {self.n})")
        if self.y_min > -10:
            raise ValueError(f"y_min must be <= -10 (got {self.y_min})")

    @property
    def h(self) -> float:
        return -self.y_min / (self.n - 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, 0.0, self.n)

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same interval with the spacing divided by ``factor``."""
        return Grid1D(self.y_min, (self.n - 1) * factor + 1)


def flat_front_grid(p: ModelParams, n: int | None = None) -> Grid1D:
    """Depth -40/min(1, sqrt(xi/2mu)); spacing fine enough for 1e-6 at y = 0."""
    y_min = -40.0 / p.slowest_rate
    if n is None:
        n = max(4000, int(math.ceil(-y_min / 4e-4)) + 1)
    return Grid1D(y_min, n)


def mode_grid(q: float, p: ModelParams, n: int | None = None) -> Grid1D:
    """Depth -40 over the slowest mode rate min(1, sqrt(q^2 + xi/2mu))."""
    slow = min(1.0, math.sqrt(q * q + p.xi / (2 * p.mu)))
    y_min = -40.0 / slow
    if n is None:
        fast = math.sqrt(q * q + 1.0) + 1.0
        n = max(4000, int(math.ceil(-y_min * fast / 0.02)) + 1)
    return Grid1D(y_min, n)


def solve_flat_front_bvp(p: ModelParams, grid: Grid1D | None = None) -> np.ndarray:
    """Nodal V_y for 2mu V'' - xi V = 2 zeta e^{2y} - zeta_i e^y, 2mu V'(0) = zeta, V(y_min) = 0."""
    if grid is None:
        grid = flat_front_grid(p)
    y, h, n = grid.y, grid.h, grid.n
    mu, xi = p.mu, p.xi
    m = n - 1                      # unknowns at nodes 1..n-1
    c = 2 * mu / h**2
    ab = np.zeros((3, m))
    ab[0, 1:] = c                  # super-diagonal
    ab[1, :] = -2 * c - xi
    ab[2, :-1] = c                 # sub-diagonal
    ab[2, -2] = 2 * c              # ghost node folded into the last row
    rhs = 2 * p.zeta * np.exp(2 * y[1:]) - p.zeta_i * np.exp(y[1:])
    rhs[-1] -= c * 2 * h * p.zeta / (2 * mu)
    try:
        sol = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolveError(f"flat-front system is singular: {exc}") from exc
    return np.concatenate(([0.0], sol))


def _mode_system(q: float, p: ModelParams, grid: Grid1D):
    """Sparse matrix and right-hand side of the mode BVP (unknowns interleaved)."""
    mu, xi, zeta, zi, gamma = p.mu, p.xi, p.zeta, p.zeta_i, p.gamma
    y, h, n = grid.y, grid.h, grid.n
    s1 = math.sqrt(q * q + 1.0)
    iq = 1j * q
    N = n - 1                       # boundary node index; node 0 is Dirichlet
    g1 = -iq * zeta / mu            # v_x'(0) = g1 - iq v_y(0)
    r = p.sqrt_2mu_xi
    g2 = (-zeta * (xi / (4 * mu + r) + 2) + zi * math.sqrt(2 * mu) / (math.sqrt(xi) + math.sqrt(2 * mu))
          - q * q * gamma) / (2 * mu)  # v_y'(0)
    rows, cols, vals = [], [], []
    rhs = np.zeros(2 * N, dtype=complex)

    def idx(j, comp):
        return 2 * (j - 1) + comp

    def put(row, j, comp, coef):
        if j == 0:
            return
        if j == N + 1:
            # ghost: v_x(N+1) = v_x(N-1) + 2h(g1 - iq v_y(N)), v_y(N+1) = v_y(N-1) + 2h g2
            if comp == 0:
                put(row, N - 1, 0, coef)
                put(row, N, 1, -2 * h * iq * coef)
                rhs[row] -= 2 * h * g1 * coef
            else:
                put(row, N - 1, 1, coef)
                rhs[row] -= 2 * h * g2 * coef
            return
        rows.append(row)
        cols.append(idx(j, comp))
        vals.append(coef)

    e1 = np.exp(s1 * y)
    e2 = np.exp((s1 + 1) * y)
    fx = iq * zi * e1 - iq * zeta * (s1 + 1) * e2
    fy = zi * e1 + (q * q * zeta - 2 * zeta * (s1 + 1)) * e2
    a = mu / h**2
    b = mu * iq / (2 * h)
    for j in range(1, N + 1):
        rx, ry = idx(j, 0), idx(j, 1)
        # mu (v_x'' - 2 q^2 v_x + iq v_y') - xi v_x = f_x
        put(rx, j - 1, 0, a)
        put(rx, j, 0, -2 * a - 2 * mu * q * q - xi)
        put(rx, j + 1, 0, a)
        put(rx, j + 1, 1, b)
        put(rx, j - 1, 1, -b)
        rhs[rx] += fx[j]
        # mu (2 v_y'' - q^2 v_y + iq v_x') - xi v_y = f_y
        put(ry, j - 1, 1, 2 * a)
        put(ry, j, 1, -4 * a - mu * q * q - xi)
        put(ry, j + 1, 1, 2 * a)
        put(ry, j + 1, 0, b)
        put(ry, j - 1, 0, -b)
        rhs[ry] += fy[j]
    A = sparse.csc_matrix((vals, (rows, cols)), shape=(2 * N, 2 * N), dtype=complex)
    return A, rhs


def solve_mode_fields(q: float, p: ModelParams, grid: Grid1D | None = None):
    """Nodal (v_x, v_y) of the linearized mode problem for rho = e^{iqx}."""
    if q <= 0:
        raise ValueError("q must be positive")
    if grid is None:
        grid = mode_grid(q, p)
    A, rhs = _mode_system(q, p, grid)
    sol = spsolve(A, rhs)
    if not np.all(np.isfinite(sol)):
        raise SolveError(f"mode system at q = {q:g} is singular or ill-conditioned")
    vx = np.concatenate(([0.0], sol[0::2]))
    vy = np.concatenate(([0.0], sol[1::2]))
    return vx, vy


def _mode_rate(q, p, grid):
    _, vy = solve_mode_fields(q, p, grid)
    return p.zeta / (2 * p.mu) + float(vy[-1].real)


def solve_mode_bvp(q: float, p: ModelParams, grid: Grid1D | None = None,
                   extrapolate: bool = True) -> float:
    """Growth rate zeta/(2mu) + Re v_y(0) from the discretized mode problem.

    With ``extrapolate`` the O(h^2) values on ``grid`` and on its halving are
    combined by one Richardson step; otherwise the single-grid value is
    returned (used for convergence studies).
    """
    if grid is None:
        grid = mode_grid(q, p)
    if extrapolate:
        return richardson(lambda g: _mode_rate(q, p, g), grid)
    return _mode_rate(q, p, grid)


def richardson(f, grid: Grid1D, order: int = 2):
    """(2^order f(h/2) - f(h)) / (2^order - 1) for a solver ``f(grid)``."""
    coarse = f(grid)
    fine = f(grid.refined(2))
    w = 2.0**order
    return (w * fine - coarse) / (w - 1)


def observed_order(errors) -> np.ndarray:
    """log2 of successive error ratios for a sequence of halvings."""
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])
