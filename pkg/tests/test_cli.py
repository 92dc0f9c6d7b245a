import csv
import io
import json
import subprocess
import sys

import pytest

from rotsurf4.cli import main

CLIFFORD = "family:circle(lambda=1,b0=1,d=0)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_clifford(capsys):
    code, out, _ = run(capsys, "analyze", "--profile", CLIFFORD, "--grid", "32x32")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == 1
    assert len(rep["records"]) == 32 * 32
    assert max(abs(r["K"]) for r in rep["records"]) <= 1e-10


def test_analyze_line_curvature_is_minus_b_squared(capsys):
    code, out, _ = run(capsys, "analyze", "--profile", "family:line(p=1,q=0,u=0,v=1)", "--grid", "5x3")
    assert code == 0
    for r in json.loads(out)["records"]:
        assert r["K"] == pytest.approx(-r["b"] ** 2, abs=1e-15)


def test_classify_verdicts(capsys):
    cases = {
        (CLIFFORD, None): "first",
        ("family:logspiral(mu=1,s0=1)", None): "none",
        ("family:line(p=1,q=0,u=1,v=0)", "0.5:2"): "harmonic",
    }
    for (spec, s_range), kind in cases.items():
        extra = ["--s", s_range] if s_range else []
        code, out, err = run(capsys, "classify", "--profile", spec, "--grid", "8x8", *extra)
        assert code == 0, err
        rep = json.loads(out)
        assert rep["classification"]["kind"] == kind
        assert rep["theorem1"]["agree"]
    rep = json.loads(run(capsys, "classify", "--profile", CLIFFORD, "--grid", "8x8")[1])
    assert rep["classification"]["f_mean"] == pytest.approx(4, abs=1e-4)
    assert rep["classification"]["C_norm"] <= 1e-5


def test_laplacian_table(capsys):
    code, out, _ = run(capsys, "laplacian", "--profile", "family:logspiral(mu=1,s0=1)", "--grid", "4x4")
    assert code == 0
    assert json.loads(out)["summary"]["max_laplacian_discrepancy"] <= 1e-4


def test_vranceanu_is_reparametrized(capsys):
    code, out, _ = run(capsys, "classify", "--profile", "family:vranceanu(k=0.3)", "--grid", "6x6")
    assert code == 0
    rep = json.loads(out)
    assert rep["summary"]["reparametrized"]
    assert rep["classification"]["kind"] == "none"


def test_group_check(capsys):
    code, out, _ = run(capsys, "group-check", "--surface", "clifford")
    assert code == 0 and json.loads(out)["group_check"]["pass"]
    code, out, _ = run(capsys, "group-check", "--surface", "circle(lambda=2)")
    assert code == 0
    rep = json.loads(out)["group_check"]
    assert not rep["closure"] and rep["closure_residual"] >= 1
    code, out, _ = run(capsys, "group-check", "--surface", "family:vranceanu(k=0.3)")
    assert json.loads(out)["group_check"]["pass"]


def test_bicomplex_commands(capsys):
    assert run(capsys, "bicomplex", "mul", "1+1i", "1+1j")[1].strip() == "1+1i+1j+1ij"
    assert run(capsys, "bicomplex", "conj", "1+2i+3j+4ij", "--which", "t1")[1].strip() == "1-2i+3j-4ij"
    assert run(capsys, "bicomplex", "inv", "2")[1].strip() == "0.5+0i+0j+0ij"
    code, out, _ = run(capsys, "bicomplex", "matrix", "i")
    assert code == 0 and len(out.strip().splitlines()) == 4


@pytest.mark.parametrize(
    "argv, code, error",
    [
        (["analyze", "--profile", "family:circle(lambda=1"], 2, "ParseError"),
        (["analyze", "--profile", "expr:x=cos(s;y=s;s=0:1"], 2, "ParseError"),
        (["analyze", "--profile", CLIFFORD, "--grid", "0x3"], 2, None),
        (["analyze", "--profile", CLIFFORD, "--step", "-1"], 2, None),
        (["analyze", "--profile", "family:line(p=0,q=0,u=1,v=0)", "--s", "0:1"], 3, "DegeneracyError"),
        (["analyze", "--profile", CLIFFORD, "--s", "1:1"], 2, None),
        (["bicomplex", "inv", "1+ij"], 3, "InversionError"),
        (["bicomplex", "mul", "1+2k", "1"], 2, "ParseError"),
    ],
)
def test_exit_codes_and_structured_errors(capsys, argv, code, error):
    got, _, err = run(capsys, *argv)
    assert got == code
    payload = json.loads(err)
    assert payload["exit_code"] == code
    if error:
        assert payload["error"] == error
    if error == "ParseError":
        assert isinstance(payload["offset"], int)


def test_classify_non_flat_skips_cross_check(capsys):
    code, out, _ = run(capsys, "classify", "--profile", "family:line(p=1,q=0,u=0,v=1)", "--grid", "6x6")
    assert code == 0
    rep = json.loads(out)
    assert rep["theorem1"]["flat"] is False
    assert rep["classification"]["kind"] == "none"


def test_parse_error_offset_points_at_problem(capsys):
    _, _, err = run(capsys, "analyze", "--profile", "family:circle(lambda=1")
    assert json.loads(err)["offset"] == 22


def test_csv_output(capsys):
    code, out, _ = run(capsys, "analyze", "--profile", CLIFFORD, "--grid", "3x2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    assert {"s", "t", "K", "dG_closed_0", "dG_numeric_5"} <= set(rows[0])


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "classify", "--profile", CLIFFORD, "--grid", "8x8", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["classification"]["kind"] == "first"


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "rotsurf4", "analyze", "--profile", "family:logspiral(mu=0.5,s0=1)",
            "--grid", "6x5"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a) > 0
