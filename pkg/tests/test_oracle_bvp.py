"""Finite-difference oracles against the closed forms."""

import numpy as np
import pytest

from tissue_fingers.dispersion import growth_rate_value, lambda_s
from tissue_fingers.errors import SolveError
from tissue_fingers.oracle.bvp import (Grid1D, mode_grid, observed_order, richardson,
                                       solve_mode_bvp, solve_mode_fields)
from tissue_fingers.params import ModelParams, companion_params

from conftest import CONTRACTILITIES

Q_SET = (0.25, 0.5, 1.0, 2.0, 4.0)


@pytest.mark.slow
@pytest.mark.parametrize("zeta", CONTRACTILITIES)
def test_mode_oracle_matrix(zeta):
    p = companion_params(zeta)
    for q in Q_SET:
        lam = growth_rate_value(q, p)
        assert abs(lam - solve_mode_bvp(q, p)) <= 1e-6 * (abs(lam) + p.gamma * q / p.mu), q


def test_surface_tension_only():
    p = companion_params(0.0).replace(zeta_i=0.0)
    for q in (0.5, 2.0):
        ref = p.gamma * lambda_s(q, p)
        assert solve_mode_bvp(q, p) == pytest.approx(ref, rel=1e-6)


def test_mode_oracle_second_order(p20):
    q = 1.0
    exact = growth_rate_value(q, p20)
    g = mode_grid(q, p20, n=2001)
    errs = []
    for _ in range(4):
        errs.append(abs(solve_mode_bvp(q, p20, g, extrapolate=False) - exact))
        g = g.refined(2)
    orders = observed_order(errs)
    assert np.all(np.abs(orders - 2.0) <= 0.2), orders


def test_richardson_removes_leading_error(p20):
    q = 1.0
    exact = growth_rate_value(q, p20)
    g = mode_grid(q, p20)
    plain = abs(solve_mode_bvp(q, p20, g, extrapolate=False) - exact)
    extrap = abs(solve_mode_bvp(q, p20, g) - exact)
    assert extrap < 1e-2 * plain


def test_richardson_on_polynomial():
    g = Grid1D(-10.0, 201)
    # f(h) = 1 + 3 h^2 is made exact by one step
    assert richardson(lambda gr: 1 + 3 * gr.h**2, g) == pytest.approx(1.0, abs=1e-14)


def test_mode_fields_decay(p20):
    vx, vy = solve_mode_fields(1.0, p20)
    assert abs(vy[1]) < 1e-10 * abs(vy[-1])
    assert vx.shape == vy.shape


def test_mode_nonpositive_q(p20):
    with pytest.raises(ValueError):
        solve_mode_fields(0.0, p20)


def test_default_grid_depth(p20):
    g = mode_grid(1.0, p20)
    assert g.y_min == pytest.approx(-40.0)
    assert g.n >= 4000
