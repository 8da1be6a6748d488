"""Acceptance criteria 1-8, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed through
capsys.disabled so they reach the terminal) or directly as a script.
"""

import math
import time

import numpy as np
import pytest

from tissue_fingers.critical_mode import find_critical
from tissue_fingers.dispersion import (growth_rate_value, lambda_c, lambda_s, lambda_t,
                                       large_q_limit, stokes_det)
from tissue_fingers.flat_front import flat_speed, flat_velocity
from tissue_fingers.oracle.bvp import Grid1D, observed_order, solve_flat_front_bvp, solve_mode_bvp
from tissue_fingers.oracle.cascade import cascade_bifurcation
from tissue_fingers.params import companion_params
from tissue_fingers.second_order import kinematic_residual, tractions_T
from tissue_fingers.third_order import bifurcation_coefficient
from tissue_fingers.verify import residual_suite

try:
    from conftest import CONTRACTILITIES, random_params
except ImportError:  # pragma: no cover - script use from the repository root
    from tests.conftest import CONTRACTILITIES, random_params

SWEEP = np.linspace(-0.05, -1.95, 40)
ORACLE_Q = (0.25, 0.5, 1.0, 2.0, 4.0)


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    return ok, line


# -- the criteria ------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    cm = find_critical(companion_params(-20.0))
    dt = time.perf_counter() - t0
    ok = 75.0 <= cm.period_um <= 125.0 and dt < 1.0
    return report(1, ok, f"period {cm.period_um:.2f} um at zeta=-20 kPa ({dt:.3f} s)")


def criterion_2():
    p = companion_params(-30.0)
    cm = find_critical(p)
    b30 = bifurcation_coefficient(cm.q0, p, slope=cm.slope)
    t0 = time.perf_counter()
    bs, bs_cor = [], []
    for z in SWEEP:
        pz = companion_params(float(z))
        c = find_critical(pz)
        bs.append(bifurcation_coefficient(c.q0, pz, slope=c.slope).b)
        bs_cor.append(bifurcation_coefficient(c.q0, pz, "corrected", slope=c.slope).b)
    dt = time.perf_counter() - t0
    bs = np.array(bs)
    ok = b30.b < 0 and np.any(bs > 0) and np.any(bs < 0) and dt < 30.0
    cor30 = bifurcation_coefficient(cm.q0, p, "corrected", slope=cm.slope).b
    detail = (f"tabulated-formula path: b(-30)={b30.b:.4f}, sweep b in [{bs.min():.3f}, {bs.max():.3f}] "
              f"({dt:.1f} s); re-derived path (agrees with cascade oracle): b(-30)={cor30:.4f}, "
              f"sweep b in [{min(bs_cor):.3f}, {max(bs_cor):.3f}] (see notes/decisions.md)")
    return report(2, ok, detail)


def criterion_3():
    slopes = [find_critical(companion_params(z)).slope for z in CONTRACTILITIES]
    ok = all(s < 0 for s in slopes)
    return report(3, ok, f"slopes at zeta={list(CONTRACTILITIES)}: max {max(slopes):.3e}")


def criterion_4():
    t0 = time.perf_counter()
    worst = 0.0
    for z in CONTRACTILITIES:
        p = companion_params(z)
        for q in ORACLE_Q:
            lam = growth_rate_value(q, p)
            err = abs(lam - solve_mode_bvp(q, p))
            worst = max(worst, err / (abs(lam) + p.gamma * q / p.mu))
    p = companion_params(-20.0)
    y_min = -40.0 / p.slowest_rate
    errs = []
    for n in (4001, 8001, 16001, 32001):
        g = Grid1D(y_min, n)
        errs.append(np.max(np.abs(solve_flat_front_bvp(p, g) - flat_velocity(g.y, p))))
    orders = observed_order(errs)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and bool(np.all(np.abs(orders - 2.0) <= 0.2)) and dt < 60.0
    return report(4, ok, f"mode oracle worst scaled error {worst:.2e}; flat-front orders "
                          f"{np.round(orders, 3).tolist()} ({dt:.1f} s)")


def criterion_5():
    draws = random_params(100)
    fails = []
    qs = np.linspace(0.0, 1e3, 10_001)[1:]
    for i, p in enumerate(draws):
        checks = {
            "Lambda(0)": abs(growth_rate_value(0.0, p)) <= 1e-12 * abs(p.zeta / (2 * p.mu)) + 1e-300,
            "Lambda_c(0)": math.isclose(lambda_c(0.0, p), -1 / (2 * p.mu), rel_tol=1e-12),
            "D<0": bool(np.all(stokes_det(qs, p) < 0)),
            "Lambda_t>0": bool(np.all(lambda_t(qs, p) > 0)),
            "Lambda_s<0": bool(np.all(lambda_s(qs, p) < 0)),
            "V(0)=V0": math.isclose(flat_velocity(0.0, p), flat_speed(p), rel_tol=1e-12),
            "large q": abs(growth_rate_value(1e3, p) - large_q_limit(1e3, p))
                       <= 2.0 * (abs(p.zeta) + p.zeta_i + p.gamma) / p.mu / 1e3,
        }
        T = tractions_T(1.3, p)
        checks["Ty2-Ty1"] = math.isclose(T["Ty2"] - T["Ty1"], p.zeta * 1.69, rel_tol=1e-12, abs_tol=1e-12)
        fails += [f"{name}@{i}" for name, good in checks.items() if not good]
    return report(5, not fails, f"100 draws x 8 identities, failures: {fails[:5] or 'none'}")


def criterion_6():
    lines, worst, tab = [], 0.0, []
    for z in (-20.0, -30.0):
        p = companion_params(z)
        items = residual_suite(find_critical(p).q0, p)
        for it in items:
            if it.get("expected_fail"):
                tab.append(f"{it['name']}={it['max_rel_residual']:.2f}")
            else:
                worst = max(worst, it["max_rel_residual"])
    ok = worst <= 1e-8
    return report(6, ok, f"worst residual {worst:.2e} over v_t, v_c (re-derived prefactors), v_s, v1, "
                          f"p21, v21, p311, v311 at zeta=-20,-30; tabulated prefactors do not solve "
                          f"their equations ({', '.join(tab[:3])})")


def criterion_7():
    worst_b, worst_h = 0.0, 0.0
    for z in [-20.0, -30.0] + [float(s) for s in SWEEP]:
        p = companion_params(z)
        cm = find_critical(p)
        for mode in ("printed", "corrected"):
            bf = bifurcation_coefficient(cm.q0, p, mode, slope=cm.slope)
            worst_b = max(worst_b, abs(bf.b - bf.b_crosscheck) / max(abs(bf.b), abs(bf.b_crosscheck)))
        for b in (0.0, 1.0):
            r = kinematic_residual(cm.q0, p, b)
            worst_h = max(worst_h, max(abs(r["const"]), abs(r["cos2"])) / r["scale"])
    ok = worst_b <= 1e-6 and worst_h <= 1e-8
    return report(7, ok, f"dual-path b worst rel diff {worst_b:.2e}; kinematic residual {worst_h:.2e} "
                          f"(42 points)")


def criterion_8():
    # no tabulated reference curves exist; the curve data are generated and the
    # cascade oracle pins the weakly nonlinear coefficients at two points
    series_ok = True
    for z in CONTRACTILITIES:
        lam = growth_rate_value(np.linspace(0, 4, 201), companion_params(z))
        series_ok &= bool(np.all(np.isfinite(lam)))
    p = companion_params(-20.0)
    q0 = find_critical(p).q0
    cas = cascade_bifurcation(p, q0)
    bf = bifurcation_coefficient(q0, p, "corrected")
    ok = series_ok and math.isclose(bf.b, cas.b, rel_tol=1e-5)
    return report(8, ok, "curve data generated (no pointwise targets exist); "
                         f"re-derived b={bf.b:.6f} vs cascade oracle {cas.b:.6f}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(crit, capsys):
    ok, line = crit()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":  # pragma: no cover
    for crit in CRITERIA:
        print(crit()[1])
