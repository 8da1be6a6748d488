import numpy as np
import pytest

from tissue_fingers.critical_mode import find_critical
from tissue_fingers.dispersion import lambda_c, lambda_s, lambda_t
from tissue_fingers.errors import NotARootError
from tissue_fingers.mode_fields import (assemble_first_order, contractile_coeffs, contractile_mode,
                                        divergence_D1, first_order_solved, first_order_velocity,
                                        solve_split, surface_mode, traction_coeffs, traction_mode)
from tissue_fingers.oracle.residual import residual

TABULATED = "tabulated perpendicular prefactor does not solve the split problem (notes/decisions.md)"


@pytest.fixture(scope="module")
def q0(p20):
    return find_critical(p20).q0


def test_decay_rates_positive(p20, q0):
    for m in (traction_mode(q0, p20), contractile_mode(q0, p20), surface_mode(q0, p20)):
        f = m.real_part()
        for comp in (f.x, f.y):
            assert all(k > 0 for k in comp.rates())
        assert len(m) <= 16


def test_surface_mode_amplitude_is_lambda_s(p20):
    for q in (0.5, 1.0, 3.0):
        assert surface_mode(q, p20).boundary_vy().real == pytest.approx(lambda_s(q, p20), rel=1e-12)


@pytest.mark.parametrize("corrected", [
    pytest.param(False, marks=pytest.mark.xfail(strict=True, reason=TABULATED)), True])
def test_split_amplitudes_equal_lambda_components(p20, corrected):
    # v_y(0) of each split field is the matching Lambda component
    for q in (0.5, 1.43, 3.0):
        assert traction_mode(q, p20, corrected).boundary_vy().real == pytest.approx(lambda_t(q, p20), rel=1e-10)
        assert contractile_mode(q, p20, corrected).boundary_vy().real == pytest.approx(lambda_c(q, p20), rel=1e-10)


def test_surface_mode_zero_at_q0_limit(p20):
    f = surface_mode(1e-8, p20).real_part()
    assert np.max(np.abs(f.y(np.array([0.0]), np.array([0.0])))) < 1e-12


def test_traction_q_to_zero_structure(p20):
    A = traction_coeffs(1e-6, p20)
    assert abs(A["A131"]) < 1e-5
    w = np.sqrt(2 * p20.mu) / (np.sqrt(p20.xi) + np.sqrt(2 * p20.mu))
    assert A["A132"].real == pytest.approx(w / p20.xi, rel=1e-6)


def test_contractile_denominator_far_from_zero(p20):
    for q in (0.25, 1.0, 4.0):
        s1 = np.sqrt(q * q + 1)
        assert abs(4 * p20.mu * (s1 + 1) - p20.xi) > 1e3 * p20.xi
        assert contractile_coeffs(q, p20)["grad"] != 0


@pytest.mark.parametrize("which, builder", [("split_t", traction_mode), ("split_c", contractile_mode)])
def test_rederived_split_fields_solve_their_problems(p20, q0, which, builder):
    rep = residual(builder(q0, p20, corrected=True).real_part(), which, p20)
    assert rep.passed(1e-8), rep


def test_surface_field_solves_its_problem(p20, q0):
    assert residual(surface_mode(q0, p20).real_part(), "split_s", p20).passed(1e-8)


@pytest.mark.parametrize("which, builder", [("split_t", traction_mode), ("split_c", contractile_mode)])
@pytest.mark.xfail(strict=True, reason=TABULATED)
def test_tabulated_split_fields_solve_their_problems(p20, q0, which, builder):
    assert residual(builder(q0, p20).real_part(), which, p20).passed(1e-8)


def test_split_boundary_conditions_alone(p20, q0):
    # the boundary rows hold even for the tabulated prefactors
    for which, builder in (("split_t", traction_mode), ("split_c", contractile_mode)):
        rep = residual(builder(q0, p20).real_part(), which, p20)
        pieces = dict(rep.pieces)
        assert pieces["shear_bc"] < 1e-10 and pieces["normal_bc"] < 1e-10


def test_field_algebra_split_matches_rederived_table(p20, q0):
    x = np.linspace(0, 4, 9)
    y = np.linspace(-3, 0, 9)
    for which, builder in (("t", traction_mode), ("c", contractile_mode)):
        a = solve_split(which, q0, p20)
        b = builder(q0, p20, corrected=True).real_part()
        np.testing.assert_allclose(a.y(x, y), b.y(x, y), rtol=1e-9, atol=1e-12 * np.max(np.abs(b.y(x, y))))


def test_first_order_boundary_value(p20, q0):
    fo = assemble_first_order(q0, p20, corrected=True)
    x = np.linspace(0, 2 * np.pi / q0, 13)
    vy0 = fo.v1.y(x, np.zeros_like(x))
    np.testing.assert_allclose(vy0, -p20.zeta / (2 * p20.mu) * np.cos(q0 * x), rtol=1e-9,
                               atol=1e-9 * abs(p20.zeta / (2 * p20.mu)))
    assert fo.vy1_amp == pytest.approx(-p20.zeta / (2 * p20.mu))


def test_first_order_divergence_amplitude(p20, q0):
    v1 = first_order_solved(q0, p20)
    div0 = (v1.x.dx() + v1.y.dy()).at_y0()
    assert div0.coefficient(1, "c") == pytest.approx(divergence_D1(q0, p20), rel=1e-9)


def test_first_order_normal_curvature(p20, q0):
    v1 = first_order_solved(q0, p20)
    lhs = 2 * p20.mu * v1.y.dy().dy().at_y0().coefficient(1, "c")
    s1 = np.sqrt(q0 * q0 + 1)
    ref = p20.zeta_i - 2 * p20.zeta * (s1 + 1 + p20.xi / (4 * p20.mu))
    assert lhs == pytest.approx(ref, rel=1e-9)


def test_first_order_residual(p20, q0):
    assert residual(first_order_velocity(q0, p20, corrected=True), "v1", p20).passed(1e-8)
    assert residual(first_order_solved(q0, p20), "v1", p20).passed(1e-8)


@pytest.mark.xfail(strict=True, reason=TABULATED)
def test_tabulated_first_order_residual(p20, q0):
    assert residual(first_order_velocity(q0, p20), "v1", p20).passed(1e-8)


def test_assembly_requires_root(p20, q0):
    with pytest.raises(NotARootError):
        assemble_first_order(1.1 * q0, p20)
