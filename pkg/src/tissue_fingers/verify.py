"""Aggregated verification run: BVP oracles, residual suite and dual-path checks.

:func:`run_verification` returns a JSON-ready dictionary with one entry per
check.  Every entry carries ``passed``; entries built from the tabulated
first-order prefactors are marked ``expected_fail`` (they are known not to
satisfy their equations) and do not count towards the failure total.
"""

from __future__ import annotations

import math

from .critical_mode import find_critical
from .dispersion import growth_rate_value
from .flat_front import flat_speed
from .mode_fields import contractile_mode, first_order_solved, first_order_velocity, surface_mode, traction_mode
from .oracle.bvp import solve_flat_front_bvp, solve_mode_bvp
from .oracle.residual import residual
from .params import ModelParams
from .second_order import kinematic_residual, p21_field, second_order_coeffs, v21_field
from .third_order import bifurcation_coefficient, h_coeffs, i_coeffs, mn_coeffs, p311_field, v311_field

ORACLE_Q = (0.25, 0.5, 1.0, 2.0, 4.0)
RESIDUAL_TOL = 1e-8
KINEMATIC_TOL = 1e-8
DUAL_PATH_TOL = 1e-6
ORACLE_TOL = 1e-6


def mode_oracle_error(q: float, p: ModelParams) -> dict:
    """Closed-form Lambda(q) against the finite-difference mode problem."""
    lam = float(growth_rate_value(q, p))
    lam_bvp = solve_mode_bvp(q, p)
    bound = ORACLE_TOL * (abs(lam) + p.gamma * q / p.mu)
    err = abs(lam - lam_bvp)
    return {"q": q, "lambda": lam, "lambda_bvp": lam_bvp, "abs_error": err, "bound": bound,
            "passed": bool(err <= bound)}


def flat_front_oracle(p: ModelParams) -> dict:
    V = solve_flat_front_bvp(p)
    V0 = flat_speed(p)
    rel = float(abs(V[-1] - V0) / max(abs(V0), 1e-300))
    return {"V0": V0, "V0_bvp": float(V[-1]), "rel_error": rel, "passed": bool(rel <= ORACLE_TOL)}


def _res_item(name, report, expected_fail=False, note=""):
    item = {"name": name, "equation_id": report.equation_id,
            "max_rel_residual": report.max_rel_residual, "worst_point": list(report.worst_point),
            "worst_piece": report.worst_piece, "passed": report.passed(RESIDUAL_TOL)}
    if expected_fail:
        item["expected_fail"] = True
        item["note"] = note
    return item


def residual_suite(q0: float, p: ModelParams) -> list:
    """Residuals of every assembled field at the critical wavenumber."""
    slip = "tabulated perpendicular prefactors do not solve the split problem"
    out = [
        _res_item("v_t tabulated", residual(traction_mode(q0, p).real_part(), "split_t", p), True, slip),
        _res_item("v_c tabulated", residual(contractile_mode(q0, p).real_part(), "split_c", p), True, slip),
        _res_item("v1 tabulated", residual(first_order_velocity(q0, p), "v1", p), True, slip),
        _res_item("v_t", residual(traction_mode(q0, p, corrected=True).real_part(), "split_t", p)),
        _res_item("v_c", residual(contractile_mode(q0, p, corrected=True).real_part(), "split_c", p)),
        _res_item("v_s", residual(surface_mode(q0, p).real_part(), "split_s", p)),
        _res_item("v1", residual(first_order_velocity(q0, p, corrected=True), "v1", p)),
        _res_item("v1 field algebra", residual(first_order_solved(q0, p), "v1", p)),
    ]
    for b in (0.0, 1.0):
        so = second_order_coeffs(q0, p, b)
        out.append(_res_item(f"p21 b={b:g}", residual(p21_field(q0, b), "p21", p, b=b)))
        out.append(_res_item(f"v21 b={b:g}", residual(v21_field(q0, p, so), "v21", p, so=so)))
    beta = second_order_coeffs(q0, p).beta
    out.append(_res_item("p311", residual(p311_field(q0, beta), "p311", p, beta=beta)))
    for mode in ("printed", "corrected"):
        bf = bifurcation_coefficient(q0, p, mode)
        H = h_coeffs(q0, bf.beta)
        I = i_coeffs(q0, p, H)
        MN = mn_coeffs(q0, p, bf.Q, bf.R, I)
        rep = residual(v311_field(q0, p, I, MN), "v311", p, H=H, Q=bf.Q, R=bf.R)
        out.append(_res_item(f"v311 {mode}", rep))
    return out


def kinematic_check(q0: float, p: ModelParams, b: float = 0.0) -> dict:
    r = kinematic_residual(q0, p, b)
    rel = max(abs(r["const"]), abs(r["cos2"])) / r["scale"]
    return {"b": b, "const": r["const"], "cos2": r["cos2"], "rel": rel, "passed": rel <= KINEMATIC_TOL}


def dual_path_check(q0: float, p: ModelParams, slope: float, mode: str = "printed") -> dict:
    bf = bifurcation_coefficient(q0, p, mode, slope=slope)
    rel = abs(bf.b - bf.b_crosscheck) / max(abs(bf.b), abs(bf.b_crosscheck), 1e-300)
    return {"mode": mode, "b": bf.b, "b_crosscheck": bf.b_crosscheck, "rel": rel,
            "passed": rel <= DUAL_PATH_TOL}


def run_verification(p: ModelParams) -> dict:
    """Run every check at the parameters ``p`` and summarise pass/fail."""
    cm = find_critical(p)
    report = {
        "q0": cm.q0,
        "period_um": cm.period_um,
        "mode_oracle": [mode_oracle_error(q, p) for q in ORACLE_Q],
        "flat_front_oracle": flat_front_oracle(p),
        "residuals": residual_suite(cm.q0, p),
        "kinematic": [kinematic_check(cm.q0, p, b) for b in (0.0, 1.0)],
        "dual_path": [dual_path_check(cm.q0, p, cm.slope, m) for m in ("printed", "corrected")],
    }
    items = (report["mode_oracle"] + [report["flat_front_oracle"]] + report["residuals"]
             + report["kinematic"] + report["dual_path"])
    counted = [it for it in items if not it.get("expected_fail")]
    failed = sum(not it["passed"] for it in counted)
    report["summary"] = {"checks": len(counted), "failed": failed,
                         "expected_fail": len(items) - len(counted),
                         "all_finite": all(math.isfinite(v) for it in items for v in it.values()
                                           if isinstance(v, float))}
    return report
