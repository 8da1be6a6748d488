"""Stability and bifurcation analysis of spreading active polar tissue fronts.

Typical use::

    from tissue_fingers import companion_params, find_critical, bifurcation_coefficient

    p = companion_params(-20.0)          # zeta in kPa, companions fixed
    cm = find_critical(p)
    res = bifurcation_coefficient(cm.q0, p, slope=cm.slope)
"""

from .critical_mode import CriticalMode, check_hypotheses, find_critical
from .dispersion import growth_rate, growth_rate_deriv, growth_rate_value
from .errors import (ConfigError, FingerError, HypothesisViolation, NoRootError, ResonanceError,
                     SignError, SolveError)
from .flat_front import flat_speed, flat_velocity
from .params import LabParams, ModelParams, companion_params, from_lab_units, load_params, to_lab_units
from .second_order import second_order_coeffs
from .shape import leading_eigenvalue, theta_of_alpha, wave_profile, wave_speed
from .third_order import Bifurcation, bifurcation_coefficient, classify

__version__ = "0.1.0"

__all__ = [
    "Bifurcation", "ConfigError", "CriticalMode", "FingerError", "HypothesisViolation", "LabParams",
    "ModelParams", "NoRootError", "ResonanceError", "SignError", "SolveError",
    "bifurcation_coefficient", "check_hypotheses", "classify", "companion_params", "find_critical",
    "flat_speed", "flat_velocity", "from_lab_units", "growth_rate", "growth_rate_deriv",
    "growth_rate_value", "leading_eigenvalue", "load_params", "second_order_coeffs",
    "theta_of_alpha", "to_lab_units", "wave_profile", "wave_speed",
]
