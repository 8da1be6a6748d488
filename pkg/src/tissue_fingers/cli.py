"""Command-line front end.

Subcommands::

    dispersion   Lambda(q) and its components as CSV
    critical     critical wavenumber, period and hypothesis checks (JSON)
    bifurcation  beta, V21 and the coefficient b at one contractility (JSON)
    sweep        bifurcation data over a contractility range (JSON lines)
    shape        two-term finger profile as CSV (x_um, rho_um)
    verify       oracle comparisons and residual checks (JSON report)

Exit codes: 0 ok, 1 configuration error, 2 no root, 3 resonance,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .critical_mode import check_hypotheses, find_critical
from .dispersion import growth_rate
from .errors import ConfigError, HypothesisViolation, NoRootError, ResonanceError, SignError
from .params import LabParams, ModelParams, companion_params, from_lab_units, load_params, validate
from .second_order import second_order_coeffs
from .shape import wave_profile
from .third_order import bifurcation_coefficient

EXIT_OK, EXIT_CONFIG, EXIT_NOROOT, EXIT_RESONANCE, EXIT_VERIFY = 0, 1, 2, 3, 4

DISPERSION_HEADER = ["q_per_Lc", "q_per_um", "lambda", "lambda_t", "lambda_c", "lambda_s", "det_D"]


# -- parameter handling ------------------------------------------------------

def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> n equally spaced values from a to b (inclusive)."""
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(f"range must look like a:b:n, got {text!r}") from None
    if n < 1:
        raise ConfigError(f"range needs at least one point, got n={n}")
    return np.linspace(a, b, n)


def base_lab_params(args) -> LabParams:
    if args.params:
        lab = load_params(args.params)
    else:
        lab = LabParams(mu=25.0, zeta=-20.0, zeta_i=0.1, xi=100.0, gamma=0.2, Lc=25.0)
    if getattr(args, "zeta", None) is not None:
        try:
            lab = replace(lab, zeta=args.zeta)
        except SignError as exc:
            raise ConfigError(str(exc)) from exc
    return lab


def model_params(args, zeta_kPa: float | None = None) -> ModelParams:
    lab = base_lab_params(args)
    if zeta_kPa is not None:
        try:
            lab = replace(lab, zeta=float(zeta_kPa))
        except SignError as exc:
            raise ConfigError(str(exc)) from exc
    return validate(from_lab_units(lab), args.eps_res)


def zeta_values(args) -> list:
    if args.zeta_range:
        return [float(z) for z in parse_range(args.zeta_range)]
    return [base_lab_params(args).zeta]


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, default=_json_default, sort_keys=False)


# -- dispersion --------------------------------------------------------------

def dispersion_rows(p: ModelParams, qs) -> list:
    rows = []
    for q in qs:
        d = growth_rate(float(q), p)
        rows.append([float(q), float(q) / p.Lc, d.lam, d.lambda_t, d.lambda_c, d.lambda_s, d.det_D])
    return rows


def _write_rows(fh, header, rows, fmt):
    if fmt == "json":
        for r in rows:
            fh.write(_dumps(dict(zip(header, r))) + "\n")
        return
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])


def cmd_dispersion(args) -> int:
    qs = parse_range(args.q_range)
    zetas = zeta_values(args)
    if len(zetas) > 1:
        if not args.out:
            raise ConfigError("--out DIR is required when --zeta-range has several values")
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        ext = "csv" if args.format == "csv" else "jsonl"
        for z in zetas:
            p = model_params(args, z)
            with open(outdir / f"dispersion_zeta_{z:+.6g}kPa.{ext}", "w", newline="",
                      encoding="utf-8") as fh:
                _write_rows(fh, DISPERSION_HEADER, dispersion_rows(p, qs), args.format)
        return EXIT_OK
    p = model_params(args, zetas[0])
    fh, close = _open_out(args.out)
    try:
        _write_rows(fh, DISPERSION_HEADER, dispersion_rows(p, qs), args.format)
    finally:
        if close:
            fh.close()
    return EXIT_OK


# -- critical ----------------------------------------------------------------

def critical_record(p: ModelParams, zeta_kPa: float, q_max: float, n_scan: int) -> dict:
    cm = find_critical(p, q_max=q_max, n_scan=n_scan)
    try:
        h = check_hypotheses(cm, p, raise_on_violation=False)
        hyp = {"harmonics_clear": h.harmonics_clear, "transversal": h.transversal,
               "smallq_positive": h.smallq_positive, "all_harmonics_negative": h.all_negative,
               "min_abs_harmonic": h.min_abs_harmonic,
               "harmonics": {str(j): v for j, v in h.harmonics}}
    except HypothesisViolation as exc:  # pragma: no cover - raise_on_violation=False
        hyp = {"error": str(exc)}
    return {"zeta_kPa": zeta_kPa, "q0": cm.q0, "q0_per_um": cm.q0 / p.Lc,
            "period_internal": cm.period_internal, "period_um": cm.period_um,
            "slope": cm.slope, "hypotheses": hyp, "warnings": list(cm.warnings)}


def cmd_critical(args) -> int:
    fh, close = _open_out(args.out)
    try:
        zetas = zeta_values(args)
        for z in zetas:
            rec = critical_record(model_params(args, z), z, args.q_max, args.n_scan)
            fh.write(_dumps(rec) + "\n" if len(zetas) > 1 else json.dumps(rec, indent=2) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


# -- bifurcation / sweep -----------------------------------------------------

def bifurcation_record(p: ModelParams, zeta_kPa: float, q_max: float = 1e3,
                       n_scan: int = 2000) -> dict:
    """Printed-path result at top level, the corrected path nested."""
    cm = find_critical(p, q_max=q_max, n_scan=n_scan)
    res = bifurcation_coefficient(cm.q0, p, "printed", slope=cm.slope)
    cor = bifurcation_coefficient(cm.q0, p, "corrected", slope=cm.slope)
    warnings = list(cm.warnings) + list(res.warnings)
    if res.classification != cor.classification:
        warnings.append("printed and corrected second-order inputs give different "
                        f"classifications ({res.classification} vs {cor.classification})")
    return {
        "zeta_kPa": zeta_kPa, "q0": cm.q0, "period_um": cm.period_um, "slope": cm.slope,
        "beta": res.beta, "V21": res.V21, "V21_alt": res.second.V21_alt, "D2": res.second.D2,
        "b": res.b, "b_crosscheck": res.b_crosscheck, "classification": res.classification,
        "lambda_scale": res.lambda_scale, "mode": res.mode,
        "corrected": {"b": cor.b, "b_crosscheck": cor.b_crosscheck,
                      "classification": cor.classification, "D2": cor.inputs.D2,
                      "lambda_scale": cor.lambda_scale, "warnings": list(cor.warnings)},
        "warnings": warnings,
    }


def cmd_bifurcation(args) -> int:
    z = zeta_values(args)[0]
    rec = bifurcation_record(model_params(args, z), z, args.q_max, args.n_scan)
    fh, close = _open_out(args.out)
    try:
        fh.write(json.dumps(rec, indent=2, default=_json_default) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _sweep_point(task):
    p, z, q_max, n_scan = task
    try:
        return _dumps(bifurcation_record(p, z, q_max, n_scan))
    except NoRootError as exc:
        return _dumps({"zeta_kPa": z, "error": "no_root", "message": str(exc)})


def cmd_sweep(args) -> int:
    if not args.zeta_range:
        raise ConfigError("sweep needs --zeta-range a:b:n")
    tasks = [(model_params(args, z), z, args.q_max, args.n_scan) for z in zeta_values(args)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            lines = list(ex.map(_sweep_point, tasks))
    else:
        lines = [_sweep_point(t) for t in tasks]
    fh, close = _open_out(args.out)
    try:
        for line in lines:
            fh.write(line + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


# -- shape -------------------------------------------------------------------

def cmd_shape(args) -> int:
    p = model_params(args, zeta_values(args)[0])
    cm = find_critical(p, q_max=args.q_max, n_scan=args.n_scan)
    beta = second_order_coeffs(cm.q0, p).beta if args.alpha != 0 else 0.0
    shape = wave_profile(args.alpha, cm.q0, beta, args.n_samples)
    x_um, rho_um = shape.in_um(p.Lc)
    fh, close = _open_out(args.out)
    try:
        _write_rows(fh, ["x_um", "rho_um"], list(zip(x_um, rho_um)), args.format)
    finally:
        if close:
            fh.close()
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import run_verification

    p = model_params(args, zeta_values(args)[0])
    report = run_verification(p)
    fh, close = _open_out(args.out)
    try:
        fh.write(json.dumps(report, indent=2, default=_json_default) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_VERIFY


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="key=value parameter file in lab units "
                        "(default: mu=25 MPa s, xi=100 Pa s/um^2, zeta_i=0.1 kPa/um, "
                        "gamma=0.2 mN/m, Lc=25 um, zeta=-20 kPa)")
    common.add_argument("--zeta", type=float, help="override zeta [kPa]")
    common.add_argument("--zeta-range", help="contractility values a:b:n [kPa]")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (or directory for multi-file output)")
    common.add_argument("--eps-res", type=float, default=1e-10, help="resonance threshold")
    common.add_argument("--q-max", type=float, default=1e3, help="root scan bound [1/Lc]")
    common.add_argument("--n-scan", type=int, default=2000, help="root scan grid size")

    ap = argparse.ArgumentParser(prog="tissue-fingers", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("dispersion", parents=[common], help="growth-rate curve")
    s.add_argument("--q-range", default="0:4:401", help="wavenumbers a:b:n [1/Lc]")
    s.set_defaults(func=cmd_dispersion)
    s = sub.add_parser("critical", parents=[common], help="critical wavenumber and period")
    s.set_defaults(func=cmd_critical)
    s = sub.add_parser("bifurcation", parents=[common], help="coefficient b at one point")
    s.set_defaults(func=cmd_bifurcation)
    s = sub.add_parser("sweep", parents=[common], help="b over a contractility range")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_sweep)
    s = sub.add_parser("shape", parents=[common], help="two-term finger profile")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--n-samples", type=int, default=201)
    s.set_defaults(func=cmd_shape)
    s = sub.add_parser("verify", parents=[common], help="oracle and residual suite")
    s.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SignError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOROOT
    except ResonanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
