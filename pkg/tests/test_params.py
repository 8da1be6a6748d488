import math

import pytest

from tissue_fingers.errors import ConfigError, ResonanceError, SignError
from tissue_fingers.params import (LabParams, ModelParams, companion_params, format_params_text,
                                   from_lab_units, load_params, parse_params_text, resonances,
                                   to_lab_units, validate)


def test_internal_units_of_companion_values():
    p = companion_params(-20.0)
    assert p.mu == pytest.approx(25000.0)
    assert p.xi == pytest.approx(62.5)
    assert p.zeta_i == pytest.approx(2.5)
    assert p.gamma == pytest.approx(0.008)
    assert p.zeta == -20.0
    assert p.Lc == 25.0


def test_lab_round_trip(draws):
    for p in draws[:20]:
        back = from_lab_units(to_lab_units(p))
        for name in ("mu", "zeta", "zeta_i", "xi", "gamma", "Lc"):
            assert getattr(back, name) == pytest.approx(getattr(p, name), rel=1e-14)


@pytest.mark.parametrize("field, value", [("mu", 0.0), ("zeta", 1.0), ("zeta_i", -0.1),
                                          ("xi", -1.0), ("gamma", -0.2), ("Lc", 0.0)])
def test_sign_violations(field, value):
    kw = dict(mu=25.0, zeta=-20.0, zeta_i=0.1, xi=100.0, gamma=0.2, Lc=25.0)
    kw[field] = value
    with pytest.raises(SignError):
        LabParams(**kw)


def test_zero_contractility_allowed():
    assert companion_params(0.0).zeta == 0.0


def test_text_format_round_trip(tmp_path):
    lab = to_lab_units(companion_params(-12.0))
    path = tmp_path / "p.conf"
    path.write_text("# comment\n" + format_params_text(lab))
    assert load_params(path) == lab


@pytest.mark.parametrize("text, fragment", [
    ("mu_MPa_s = 1\n", "missing"),
    ("nonsense\n", "key=value"),
    ("colour = 3\n", "unknown key"),
    ("mu_MPa_s = x\n", "not a number"),
    ("mu_MPa_s = 1\nmu_MPa_s = 2\n", "duplicate"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_params_text(text)


def test_parse_sign_error_is_config_error():
    text = format_params_text(LabParams(25.0, -20.0, 0.1, 100.0, 0.2, 25.0)).replace("-20.0", "20.0")
    with pytest.raises(ConfigError):
        parse_params_text(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_params(tmp_path / "nope.conf")


def test_resonance_detected():
    # 2 mu = xi makes one of the tabulated denominators vanish
    p = ModelParams(mu=10.0, zeta=-1.0, zeta_i=1.0, xi=20.0, gamma=0.1)
    assert resonances(p)
    with pytest.raises(ResonanceError) as exc:
        validate(p)
    assert exc.value.names


def test_companions_not_resonant():
    for z in (0.0, -6.0, -20.0, -30.0):
        assert resonances(companion_params(z)) == []


def test_derived_scales():
    p = companion_params(-20.0)
    assert p.sqrt_2mu_xi == pytest.approx(math.sqrt(2 * p.mu * p.xi))
    assert p.slowest_rate == pytest.approx(min(1.0, math.sqrt(p.xi / (2 * p.mu))))
