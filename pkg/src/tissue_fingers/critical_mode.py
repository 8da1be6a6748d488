"""Critical wavenumber q0 (the nonzero root of Lambda) and hypothesis checks."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .dispersion import growth_rate_deriv, growth_rate_value, smallq_coefficient
from .errors import HypothesisViolation, NoRootError
from .params import ModelParams

DEFAULT_Q_MAX = 1.0e3
DEFAULT_N_SCAN = 2000


class MultiRootWarning(UserWarning):
    """Lambda changes sign from + to - more than once on the scan grid."""


@dataclass(frozen=True)
class CriticalMode:
    """Critical wavenumber and the derived period and slope."""

    q0: float
    period_internal: float   # 2 pi / q0 [Lc]
    period_um: float         # 2 pi Lc / q0 [um]
    slope: float             # d Lambda/dq at q0 [Lc/s]
    n_brackets: int = 1
    warnings: tuple = field(default_factory=tuple)


def rate_scale(p: ModelParams) -> float:
    """|zeta|/(2mu), falling back to (zeta_i + gamma)/(2mu) when zeta = 0."""
    return p.stress_scale


def scan_grid(q_max: float, n_scan: int) -> np.ndarray:
    """Log-uniform grid over (q_max/1e6, q_max]."""
    return np.geomspace(q_max * 1e-6, q_max, n_scan)


def find_critical(p: ModelParams, q_max: float = DEFAULT_Q_MAX, n_scan: int = DEFAULT_N_SCAN,
                  rtol: float = 1e-14) -> CriticalMode:
    """Smallest q > 0 where Lambda crosses from positive to negative.

    The crossing is bracketed on :func:`scan_grid` and refined by bisection.
    When several brackets exist the smallest one is used and a
    :class:`MultiRootWarning` is issued (and recorded on the result).
    """
    if q_max <= 0:
        raise ValueError("q_max must be positive")
    if n_scan < 100:
        raise ValueError("n_scan must be at least 100")
    qs = scan_grid(q_max, n_scan)
    lam = growth_rate_value(qs, p)
    idx = np.nonzero((lam[:-1] > 0) & (lam[1:] <= 0))[0]
    if idx.size == 0:
        raise NoRootError(f"Lambda has no +/- sign change on ({qs[0]:.3g}, {q_max:.3g}]")
    notes = []
    if idx.size > 1:
        msg = f"{idx.size} sign changes of Lambda found; using the smallest"
        warnings.warn(msg, MultiRootWarning, stacklevel=2)
        notes.append(msg)
    i = idx[0]
    lo, hi = float(qs[i]), float(qs[i + 1])
    if growth_rate_value(hi, p) == 0.0:
        q0 = hi
    else:
        q0 = bisect(lambda q: growth_rate_value(q, p), lo, hi, xtol=1e-300, rtol=rtol, maxiter=500)
    slope = growth_rate_deriv(q0, p)
    return CriticalMode(q0=q0, period_internal=2 * math.pi / q0,
                        period_um=2 * math.pi * p.Lc / q0, slope=slope,
                        n_brackets=int(idx.size), warnings=tuple(notes))


@dataclass(frozen=True)
class HypothesisReport:
    """Non-resonance and transversality data at the critical mode."""

    harmonics: tuple          # ((j, Lambda(j q0)), ...) for j = 2..J_max
    min_abs_harmonic: float
    harmonics_clear: bool
    all_negative: bool
    decreasing: bool
    transversal: bool
    smallq_positive: bool


def check_hypotheses(cm: CriticalMode, p: ModelParams, J_max: int = 16,
                     tol_harmonic: float = 1e-6, raise_on_violation: bool = True) -> HypothesisReport:
    """Check Lambda(j q0) != 0 for j = 2..J_max and d Lambda/dq (q0) != 0."""
    scale = rate_scale(p)
    js = np.arange(2, J_max + 1)
    lam = np.atleast_1d(growth_rate_value(js * cm.q0, p))
    harmonics = tuple((int(j), float(v)) for j, v in zip(js, lam))
    min_abs = float(np.min(np.abs(lam))) if lam.size else math.inf
    clear = bool(min_abs >= tol_harmonic * scale)
    transversal = bool(abs(cm.slope) * cm.q0 > 1e-12 * scale)
    report = HypothesisReport(harmonics=harmonics, min_abs_harmonic=min_abs, harmonics_clear=clear,
                              all_negative=bool(np.all(lam < 0)),
                              decreasing=bool(np.all(np.diff(lam) < 0)),
                              transversal=transversal,
                              smallq_positive=bool(smallq_coefficient(p) > 0))
    if raise_on_violation and not (clear and transversal):
        bad = []
        if not clear:
            j = harmonics[int(np.argmin(np.abs(lam)))][0]
            bad.append(f"Lambda({j} q0) = {lam[j - 2]:.3e} is resonant")
        if not transversal:
            bad.append("d Lambda/dq vanishes at q0")
        raise HypothesisViolation("; ".join(bad))
    return report
