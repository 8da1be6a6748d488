import math
import warnings

import numpy as np
import pytest

from tissue_fingers.critical_mode import (CriticalMode, MultiRootWarning, check_hypotheses,
                                          find_critical)
from tissue_fingers.dispersion import growth_rate_value, smallq_coefficient
from tissue_fingers.errors import HypothesisViolation, NoRootError
from tissue_fingers.params import ModelParams, companion_params

from conftest import CONTRACTILITIES


def test_period_near_one_hundred_micrometres(p20):
    cm = find_critical(p20)
    assert 75.0 <= cm.period_um <= 125.0
    assert cm.period_um == pytest.approx(2 * math.pi * p20.Lc / cm.q0)
    assert cm.period_internal == pytest.approx(2 * math.pi / cm.q0)


@pytest.mark.parametrize("zeta", CONTRACTILITIES)
def test_slope_negative_on_contractility_set(zeta):
    p = companion_params(zeta)
    cm = find_critical(p)
    assert cm.slope < 0
    assert abs(growth_rate_value(cm.q0, p)) <= 1e-13 * p.stress_scale


def test_root_is_a_sign_change(p20):
    cm = find_critical(p20)
    assert growth_rate_value(cm.q0 * (1 - 1e-9), p20) > 0 > growth_rate_value(cm.q0 * (1 + 1e-9), p20)


def test_root_stable_under_scan_refinement(p20):
    a = find_critical(p20).q0
    b = find_critical(p20, n_scan=4000).q0
    assert a == pytest.approx(b, rel=1e-13)


def test_root_exists_whenever_long_waves_grow():
    for zeta in np.linspace(-30.0, 0.0, 20):
        p = companion_params(float(zeta))
        assert smallq_coefficient(p) > 0
        find_critical(p)


def test_no_root_without_activity():
    p = ModelParams(mu=25000.0, zeta=0.0, zeta_i=0.0, xi=62.5, gamma=0.008, Lc=25.0)
    with pytest.raises(NoRootError):
        find_critical(p)


def test_hypotheses_at_companion_values(p20):
    cm = find_critical(p20)
    h = check_hypotheses(cm, p20)
    assert h.harmonics_clear and h.transversal and h.smallq_positive
    assert h.all_negative and h.decreasing
    assert [j for j, _ in h.harmonics] == list(range(2, 17))


def test_resonant_harmonic_is_reported(p20):
    cm = find_critical(p20)
    # pretend the root sits at half of the true one: Lambda(2 q) = 0 there
    fake = CriticalMode(q0=cm.q0 / 2, period_internal=0, period_um=0, slope=cm.slope)
    with pytest.raises(HypothesisViolation, match="resonant"):
        check_hypotheses(fake, p20)
    rep = check_hypotheses(fake, p20, raise_on_violation=False)
    assert not rep.harmonics_clear


def test_non_transversal_is_reported(p20):
    cm = find_critical(p20)
    fake = CriticalMode(q0=cm.q0, period_internal=0, period_um=0, slope=0.0)
    with pytest.raises(HypothesisViolation, match="vanishes"):
        check_hypotheses(fake, p20)


def test_smallest_bracket_chosen_and_flagged(monkeypatch, p20):
    import tissue_fingers.critical_mode as cmod

    def two_roots(q, p):
        q = np.asarray(q, dtype=float)
        return (1.0 - q) * (2.0 - q) * (3.0 - q)

    monkeypatch.setattr(cmod, "growth_rate_value", two_roots)
    monkeypatch.setattr(cmod, "growth_rate_deriv", lambda q, p: -1.0)
    with pytest.warns(MultiRootWarning):
        cm = cmod.find_critical(p20, q_max=10.0)
    assert cm.q0 == pytest.approx(1.0, rel=1e-12)
    assert cm.n_brackets == 2 and cm.warnings


@pytest.mark.parametrize("kw", [dict(q_max=-1.0), dict(n_scan=10)])
def test_argument_validation(p20, kw):
    with pytest.raises(ValueError):
        find_critical(p20, **kw)
