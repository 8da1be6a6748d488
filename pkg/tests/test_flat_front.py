import numpy as np
import pytest

from tissue_fingers.errors import DomainError
from tissue_fingers.flat_front import (FlatFront, decay_depth, flat_curvature_closed, flat_speed,
                                       flat_velocity, flat_velocity_deriv, polarity_profile)
from tissue_fingers.oracle.bvp import Grid1D, flat_front_grid, observed_order, solve_flat_front_bvp
from tissue_fingers.params import ModelParams


def test_profile_at_boundary_is_front_speed(draws):
    for p in draws:
        assert flat_velocity(0.0, p) == pytest.approx(flat_speed(p), rel=1e-12)


def test_zero_forcing():
    p = ModelParams(mu=2.0, zeta=0.0, zeta_i=0.0, xi=1.0, gamma=0.1)
    assert flat_speed(p) == 0.0
    assert np.all(flat_velocity(np.linspace(-5, 0, 11), p) == 0.0)


def test_hand_value():
    p = ModelParams(mu=1.0, zeta=-1.0, zeta_i=0.0, xi=2.0, gamma=1.0)
    assert flat_speed(p) == pytest.approx(-1.0 / 6.0, rel=1e-15)


def test_first_derivative_is_boundary_condition(draws):
    for p in draws[:30]:
        assert flat_velocity_deriv(1, p) == pytest.approx(p.zeta / (2 * p.mu), rel=1e-9, abs=1e-15)


def test_curvature_closed_form(draws):
    for p in draws[:30]:
        assert flat_velocity_deriv(2, p) == pytest.approx(flat_curvature_closed(p), rel=1e-9, abs=1e-15)


def one_sided_weights(n, npts, h):
    """Weights w with sum(w_j f(-j h)) ~ f^(n)(0), from the Taylor (Vandermonde) system."""
    import math
    x = -h * np.arange(npts)
    A = np.vander(x, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[n] = math.factorial(n)
    return np.linalg.solve(A, rhs)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_derivatives_against_finite_differences(p20, n):
    h, npts = 0.05, 11
    w = one_sided_weights(n, npts, h)
    est = np.dot(w, flat_velocity(-h * np.arange(npts), p20))
    assert est == pytest.approx(flat_velocity_deriv(n, p20), rel=1e-6)


def test_decay_far_from_front(p20):
    assert p20.slowest_rate >= 0.0
    p = ModelParams(mu=1.0, zeta=-1.0, zeta_i=1.0, xi=1.5, gamma=1.0)   # sqrt(xi/2mu) >= 0.7
    assert abs(flat_velocity(-40.0, p)) < 1e-12 * abs(flat_speed(p))


def test_linearity_in_activity(p20):
    y = np.linspace(-3, 0, 7)
    twice = p20.replace(zeta=2 * p20.zeta, zeta_i=2 * p20.zeta_i)
    np.testing.assert_allclose(flat_velocity(y, twice), 2 * flat_velocity(y, p20), rtol=1e-13)


def test_positive_y_rejected(p20):
    with pytest.raises(DomainError):
        flat_velocity(0.1, p20)
    with pytest.raises(DomainError):
        polarity_profile(1.0)


def test_summary_object(p20):
    ff = FlatFront.of(p20)
    assert ff.V0 == flat_speed(p20)
    assert ff.deriv(2) == flat_velocity_deriv(2, p20)
    assert decay_depth(p20) == pytest.approx(-40.0 / p20.slowest_rate)


def test_bvp_oracle_nodal_values(p20):
    grid = flat_front_grid(p20)
    V = solve_flat_front_bvp(p20, grid)
    assert V[-1] == pytest.approx(flat_speed(p20), rel=1e-6)
    for y in (-0.5, -1.0, -2.0):
        j = int(round((y - grid.y_min) / grid.h))
        assert V[j] == pytest.approx(flat_velocity(grid.y[j], p20), rel=1e-6)


def test_bvp_second_order_convergence(p20):
    y_min = -40.0 / p20.slowest_rate
    errs = []
    for n in (4001, 8001, 16001, 32001):
        g = Grid1D(y_min, n)
        V = solve_flat_front_bvp(p20, g)
        errs.append(np.max(np.abs(V - flat_velocity(g.y, p20))))
    orders = observed_order(errs)
    assert np.all(np.abs(orders - 2.0) <= 0.2), orders


def test_bvp_zero_forcing():
    p = ModelParams(mu=2.0, zeta=0.0, zeta_i=0.0, xi=1.0, gamma=0.1)
    assert np.all(solve_flat_front_bvp(p, Grid1D(-40.0, 400)) == 0.0)


@pytest.mark.parametrize("kw", [dict(y_min=-5.0, n=400), dict(y_min=-40.0, n=100)])
def test_grid_validation(kw):
    with pytest.raises(ValueError):
        Grid1D(**kw)
