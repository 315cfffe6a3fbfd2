from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from legvar.cli import build_parser, main
from legvar.geometry import chart_p1, cone_candidate
from legvar.varieties import EquationSet, equations_Xinv

I2 = [["1", "0"], ["0", "1"]]


def write_point(tmp_path, A, B, name="point.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"m": len(A), "A": A, "B": B}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_equations_counts(capsys):
    code, out, _ = run(capsys, "equations", "--family", "Y", "--m", "4")
    assert code == 0
    data = json.loads(out)
    assert data["family"] == "Y" and len(data["generators"]) == 30
    code, out, _ = run(capsys, "equations", "--family", "Xdeg", "--m", "2", "--k", "1")
    assert code == 0 and len(json.loads(out)["generators"]) == 10


def test_equations_writes_out_file(tmp_path, capsys):
    out_path = tmp_path / "eqs.json"
    code, out, _ = run(capsys, "equations", "--family", "Xinv", "--m", "3", "--out", str(out_path))
    assert code == 0 and out == ""
    data = json.loads(out_path.read_text())
    assert list(data) == ["family", "m", "k", "generators"]
    assert len(data["generators"]) == 107


@pytest.mark.parametrize("argv", [
    ["equations", "--family", "Y", "--m", "1"],
    ["equations", "--family", "Xdeg", "--m", "3"],
    ["equations", "--family", "Xdeg", "--m", "3", "--k", "5"],
    ["equations", "--m", "3"],
    ["verify", "--suite", "grassmann", "--m", "4"],
    ["verify", "--m", "3"],
    ["tangent-cone", "--family", "XinvSym", "--m", "3", "--point", "p1"],
    ["classify"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("legvar:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "rho-span", "--m", "2", "--seed", "-1"])
    assert exc.value.code == 2


def test_seed_accepts_hex():
    assert build_parser().parse_args(["verify", "--seed", "0xff"]).seed == 255


def test_classify_examples(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", "--point", write_point(tmp_path, I2, I2))
    assert code == 0
    st = json.loads(out)
    assert st["kind"] == "INV" and st["mu_witness"] == "1"
    p1 = write_point(tmp_path, [["0", "0"], ["0", "1"]], [["0", "0"], ["0", "0"]], "p1.json")
    code, out, _ = run(capsys, "classify", "--point", p1)
    assert json.loads(out) == {"kind": "DEG", "m": 2, "k": 1, "l": 0, "g_exceptional": False}
    # (Id, 2 Id) is on Y with lambda^2 = 2, and mu^2 = 1/2 has no rational root
    code, out, _ = run(capsys, "classify", "--point", write_point(tmp_path, I2, [["2", "0"], ["0", "2"]], "q.json"))
    st = json.loads(out)
    assert code == 0 and st["kind"] == "INV" and st["lambda_sq"] == "2" and st["mu_witness"] is None


def test_classify_errors(tmp_path, capsys):
    off = write_point(tmp_path, I2, [["1", "0"], ["0", "2"]])
    code, _, err = run(capsys, "classify", "--point", off)
    assert code == 3 and "not on Y" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "classify", "--point", str(bad))[0] == 2
    assert run(capsys, "classify", "--point", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "classify", "--point", write_point(tmp_path, I2, I2), "--m", "3")[0] == 2


def test_verify_smoothness_m3(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "smoothness", "--m", "3")
    report = json.loads(out)
    assert code == 0 and report["status"] == "PASS"
    assert list(report) == ["suite", "m", "seed", "status", "generator_counts", "certificates"]
    inv = [c for c in report["certificates"] if c["claim"] == "xinv-smooth"][0]
    assert {p["point"]: p["codim"] for p in inv["evidence"]["points"]}["p1"] == 9


def test_verify_minor_identity_m4(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "minor-identity", "--m", "4")
    report = json.loads(out)
    assert code == 0
    minors = [c for c in report["certificates"] if c["claim"] == "complementary-minors"][0]
    assert minors["evidence"]["samples"] == 10 and not minors["evidence"]["failures"]


def test_verify_singularity_m5(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "singularity", "--m", "5", "--seed", "7")
    cert = json.loads(out)["certificates"][0]
    assert code == 0 and cert["verdict"] == "SINGULAR" and cert["evidence"]["span_dimension"] >= 25


def test_verify_inconclusive_exit_4(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "smoothness", "--m", "5")
    assert code == 4 and json.loads(out)["status"] == "INCONCLUSIVE"


def test_verify_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        assert run(capsys, "verify", "--suite", "legendrian", "--m", "3", "--seed", "11", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_tangent_cone(tmp_path, capsys):
    code, out, _ = run(capsys, "tangent-cone", "--family", "Xinv", "--m", "3", "--point", "p1")
    cone = EquationSet.from_json(json.loads(out))
    assert code == 0
    assert cone.generators == cone_candidate(equations_Xinv(3), chart_p1(3)).generators
    assert sum(1 for d in cone.degrees() if d == 1) >= 9
    point = write_point(tmp_path, [["1", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]])
    assert run(capsys, "tangent-cone", "--family", "Xdeg", "--k", "1", "--m", "2", "--point", point)[0] == 0
    off = write_point(tmp_path, I2, [["1", "0"], ["0", "2"]], "off.json")
    assert run(capsys, "tangent-cone", "--family", "Y", "--m", "2", "--point", off)[0] == 3


@pytest.mark.skipif(shutil.which("legvar") is None, reason="console script not installed")
def test_console_script_exit_codes():
    ok = subprocess.run(["legvar", "equations", "--family", "Y", "--m", "2"], capture_output=True, text=True)
    assert ok.returncode == 0 and len(json.loads(ok.stdout)["generators"]) == 6
    bad = subprocess.run([sys.executable, "-m", "legvar.cli", "equations", "--family", "Y", "--m", "1"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
