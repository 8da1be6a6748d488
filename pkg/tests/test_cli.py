import csv
import io
import json
import subprocess
import sys

import pytest

from tissue_fingers.cli import DISPERSION_HEADER, main, parse_range
from tissue_fingers.critical_mode import find_critical
from tissue_fingers.dispersion import growth_rate
from tissue_fingers.errors import ConfigError
from tissue_fingers.params import LabParams, companion_params, format_params_text
from tissue_fingers.third_order import bifurcation_coefficient


def write_conf(tmp_path, name="p.conf", **kw):
    base = dict(mu=25.0, zeta=-20.0, zeta_i=0.1, xi=100.0, gamma=0.2, Lc=25.0)
    base.update(kw)
    path = tmp_path / name
    path.write_text(format_params_text(LabParams(**base)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("sub", ["dispersion", "critical", "bifurcation", "sweep", "shape", "verify"])
def test_help(sub):
    r = subprocess.run([sys.executable, "-m", "tissue_fingers.cli", sub, "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "usage" in r.stdout


def test_parse_range():
    assert list(parse_range("0:1:3")) == [0.0, 0.5, 1.0]
    with pytest.raises(ConfigError):
        parse_range("0:1")


def test_dispersion_rows_equal_library(capsys, tmp_path):
    conf = write_conf(tmp_path)
    code, out, _ = run(capsys, "dispersion", "--params", conf, "--q-range", "0:4:9")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == DISPERSION_HEADER
    p = companion_params(-20.0)
    for row in rows[1:]:
        q = float(row[0])
        d = growth_rate(q, p)
        assert [float(v) for v in row[2:]] == [d.lam, d.lambda_t, d.lambda_c, d.lambda_s, d.det_D]
        assert float(row[1]) == q / 25.0
    assert abs(float(rows[1][2])) < 1e-12 * 20 / (2 * p.mu)


def test_dispersion_one_file_per_zeta(capsys, tmp_path):
    outdir = tmp_path / "disp"
    code, _, _ = run(capsys, "dispersion", "--zeta-range=0:-30:6", "--q-range", "0:4:5",
                     "--out", str(outdir))
    assert code == 0
    files = sorted(outdir.iterdir())
    assert len(files) == 6
    for f in files:
        lines = f.read_text().splitlines()
        assert lines[0] == ",".join(DISPERSION_HEADER)
        assert lines[1].startswith("0.0,0.0,")


def test_critical_json(capsys):
    code, out, _ = run(capsys, "critical", "--zeta", "-20")
    rec = json.loads(out)
    assert code == 0
    assert 75 <= rec["period_um"] <= 125
    assert rec["slope"] < 0 and rec["hypotheses"]["harmonics_clear"]


def test_critical_sweep_json_lines(capsys):
    code, out, _ = run(capsys, "critical", "--zeta-range=-6:-30:5")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert [json.loads(l)["zeta_kPa"] for l in lines] == [-6.0, -12.0, -18.0, -24.0, -30.0]


def test_no_root_exit_code(capsys, tmp_path):
    conf = write_conf(tmp_path, zeta=0.0, zeta_i=0.0)
    code, _, err = run(capsys, "critical", "--params", conf)
    assert code == 2 and "no" in err


def test_config_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("mu_MPa_s = 1\n")
    assert run(capsys, "critical", "--params", str(bad))[0] == 1
    assert run(capsys, "critical", "--zeta", "3")[0] == 1
    assert run(capsys, "sweep")[0] == 1


def test_resonance_exit_code(capsys, tmp_path):
    conf = write_conf(tmp_path, mu=0.01, xi=32.0)     # 2 mu = xi in internal units
    assert run(capsys, "critical", "--params", conf)[0] == 3


def test_bifurcation_fields_equal_library(capsys):
    code, out, _ = run(capsys, "bifurcation", "--zeta", "-30")
    rec = json.loads(out)
    p = companion_params(-30.0)
    cm = find_critical(p)
    bf = bifurcation_coefficient(cm.q0, p, slope=cm.slope)
    assert code == 0
    assert rec["b"] == bf.b and rec["b_crosscheck"] == bf.b_crosscheck
    assert rec["classification"] == "subcritical"
    assert set(rec) >= {"q0", "period_um", "slope", "beta", "V21", "b", "b_crosscheck",
                        "classification", "warnings", "corrected"}
    # the two second-order input sets disagree here, which must be visible
    assert rec["warnings"]


def test_sweep_order_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(capsys, "sweep", "--zeta-range=-0.05:-1.95:8", "--jobs", "2", "--out", str(a))
    run(capsys, "sweep", "--zeta-range=-0.05:-1.95:8", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    zs = [json.loads(l)["zeta_kPa"] for l in a.read_text().splitlines()]
    assert zs == sorted(zs, reverse=True) and len(zs) == 8


def test_shape_csv(capsys):
    code, out, _ = run(capsys, "shape", "--alpha", "0", "--n-samples", "11")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["x_um", "rho_um"]
    assert all(float(r[1]) == 0.0 for r in rows[1:])


def test_verify_passes_on_companion_values(capsys):
    code, out, _ = run(capsys, "verify")
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["failed"] == 0
    assert all(it["passed"] for it in rep["mode_oracle"])
    assert rep["summary"]["expected_fail"] == 3


def test_verify_failure_exit_code(capsys, monkeypatch):
    import tissue_fingers.verify as v

    monkeypatch.setattr(v, "ORACLE_TOL", 0.0)
    assert run(capsys, "verify")[0] == 4


def test_console_script_installed():
    r = subprocess.run(["tissue-fingers", "critical", "--zeta", "-20"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["q0"] == find_critical(companion_params(-20.0)).q0
