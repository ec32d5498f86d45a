import json
import subprocess
import sys

import pytest

from adelab.cli import main
from adelab.formats import validate

DET = {"m": 0, "terms": [
    {"lambda": [0, 2, 0], "u_poly": [{"exps": [0], "re": "1", "im": "0"}]},
    {"lambda": [1, 0, 1], "u_poly": [{"exps": [0], "re": "-1", "im": "0"}]},
]}
ZERO = {"m": 0, "terms": []}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def det_file(tmp_path):
    path = tmp_path / "det.json"
    path.write_text(json.dumps(DET))
    return str(path)


@pytest.fixture
def zero_file(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(ZERO))
    return str(path)


# --- eval ---------------------------------------------------------------------

def test_eval_zeta_two(capsys):
    code, out, _ = run(capsys, "eval", "zeta", "--s", "2")
    assert code == 0
    assert "zeta = 1.6449340668482264364724151666460251892" in out


def test_eval_gamma_ratio_json(capsys):
    code, out, _ = run(capsys, "eval", "gamma-ratio", "--n", "2", "--z", "5+3i", "--format", "json", "--digits", "20")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "eval")
    assert doc["params"] == {"orders": [2]} and doc["values"][0]["label"] == "Gamma^(2)/Gamma"


def test_eval_epsilon_one_is_zero(capsys):
    code, out, _ = run(capsys, "eval", "epsilon", "--n", "1", "--z", "10", "--format", "json")
    vals = json.loads(out)["values"][0]
    assert code == 0 and abs(float(vals["re"])) < 1e-20 and abs(float(vals["im"])) < 1e-20


@pytest.mark.parametrize("fn,extra", [
    ("zeta-jet", ["--m", "2"]), ("gamma", []), ("log-gamma", []), ("digamma-jet", ["--k", "3"]),
    ("F", []), ("G", []), ("G", ["--method", "series", "--terms", "4"]), ("H", []),
])
def test_eval_functions(capsys, fn, extra):
    code, out, _ = run(capsys, "eval", fn, "--z", "20+10i", "--format", "json", *extra)
    assert code == 0
    validate(json.loads(out), "eval")


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "zeta-jet", "--z", "3", "--m", "1", "--format", "csv", "--digits", "10")
    assert code == 0 and out.splitlines()[0] == "label,re,im" and len(out.splitlines()) == 3


@pytest.mark.parametrize("argv,guard", [
    (["eval", "gamma", "--z", "-2"], "pole"),
    (["eval", "zeta", "--z", "1"], "pole"),
    (["eval", "zeta", "--z", "abc"], "domain"),
    (["eval", "zeta"], "domain"),
])
def test_eval_errors(capsys, argv, guard):
    code, _, err = run(capsys, *argv)
    assert code == 2 and f"[{guard}]" in err


def test_eval_regime(capsys):
    code, _, err = run(capsys, "eval", "G", "--z", "100", "--ell", "1")
    assert code == 3 and "ell >= 2" in err


# --- expand -------------------------------------------------------------------

def test_expand(capsys):
    assert run(capsys, "expand", "3")[1] == "f'' + 3*f*f' + f^3\n"
    assert run(capsys, "expand", "0")[1] == "1\n"
    out = run(capsys, "expand", "5", "--check-cn")[1]
    assert out.splitlines()[-1] == "c_5 = 10"


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "4", "--format", "json", "--check-cn")
    doc = json.loads(out)
    validate(doc, "expand")
    assert doc["c_n"] == "6" and len(doc["terms"]) == 5


# --- decompose ----------------------------------------------------------------

def test_decompose_determinant(capsys, det_file):
    code, out, _ = run(capsys, "decompose", det_file, "--ell", "2")
    doc = json.loads(out)
    validate(doc, "decompose")
    assert code == 0 and doc["leading"] == {"p0": 2, "q0": 2, "r0": 1}
    (part,) = doc["parts"]
    b = {(e["q"], e["r"]): e["u_poly"] for e in part["b_table"]}
    assert (2, 0) not in b and b[(2, 1)] == [{"exps": [0], "re": "-1", "im": "0"}]
    assert doc["reassembles"] and doc["input"] == DET


def test_decompose_zero(capsys, zero_file):
    code, out, _ = run(capsys, "decompose", zero_file, "--ell", "3")
    assert code == 0 and json.loads(out)["verdict"] == "P ≡ 0"


def test_decompose_text(capsys, det_file):
    code, out, _ = run(capsys, "decompose", det_file, "--ell", "2", "--format", "text")
    assert code == 0 and "(p0, q0, r0) = (2, 2, 1)" in out


@pytest.mark.parametrize("ell,n", [(1, 1), (2, 0)])
def test_decompose_regime(capsys, det_file, ell, n):
    code, _, err = run(capsys, "decompose", det_file, "--ell", str(ell), "--n", str(n))
    assert code == 3 and "reduce" in err


def test_decompose_schema_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 0, "terms": [{"lambda": [1, 0], "u_poly": []}]}))
    code, _, err = run(capsys, "decompose", str(bad), "--ell", "2")
    assert code == 2 and "[schema]" in err
    code, _, _ = run(capsys, "decompose", str(tmp_path / "nope.json"), "--ell", "2")
    assert code == 2


# --- verify -------------------------------------------------------------------

@pytest.mark.parametrize("suite,rows", [("cn", 30), ("bell", 22), ("eq2.5", 12)])
def test_verify_suites(capsys, suite, rows):
    code, out, _ = run(capsys, "verify", suite, "--format", "json")
    doc = json.loads(out)
    validate(doc, "verify")
    assert code == 0 and doc["passed"] and len(doc["rows"]) == rows


def test_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "stirling", "--tol", "stirling.modulus=1e-9")
    assert code == 1 and "FAIL" in out


# --- scan ---------------------------------------------------------------------

def test_scan_row_count(capsys, tmp_path):
    out_file = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--x", "0.75", "--m", "1", "--y", "0.5:100:0.05", "--out", str(out_file))
    lines = out_file.read_text().splitlines()
    # header plus 1990 samples: the stop value 100 is excluded
    assert code == 0 and len(lines) == 1991 and lines[0] == "y,re_0,im_0,re_1,im_1"
    assert "1990 samples" in out and lines[-1].startswith("99.95,")


def test_scan_precise_json(capsys):
    code, out, _ = run(capsys, "scan", "--m", "0", "--y", "30:31:0.5", "--precise", "--format", "json")
    doc = json.loads(out)
    validate(doc, "scan")
    assert code == 0 and doc["kernel"] == "mp" and [s["y"] for s in doc["samples"]] == ["30", "30.5"]


def test_scan_bad_range(capsys):
    assert run(capsys, "scan", "--y", "1:2:0")[0] == 2
    assert run(capsys, "scan", "--y", "1:2")[0] == 2


# --- witness ------------------------------------------------------------------

def test_witness_determinant(capsys, det_file):
    code, out, err = run(capsys, "witness", "--poly", det_file, "--ell", "2", "--n", "1", "--y", "30:200:0.25",
                         "--digits", "12")
    doc = json.loads(out)
    validate(doc, "witness")
    assert code == 0 and doc["verdict"] == "nonvanishing-witnessed"
    assert "not a proof" in doc["text"] and "verdict" in err


def test_witness_zero(capsys, zero_file):
    code, out, _ = run(capsys, "witness", "--poly", zero_file, "--ell", "2", "--n", "1")
    assert code == 0 and json.loads(out)["verdict"] == "P ≡ 0"


def test_witness_inconclusive_is_not_an_error(capsys, det_file):
    code, out, _ = run(capsys, "witness", "--poly", det_file, "--ell", "2", "--n", "1", "--y", "30:40:0.5",
                       "--lower", "1e9", "--C0", "2")
    assert code == 0 and json.loads(out)["verdict"] == "inconclusive"


# --- configuration and determinism -------------------------------------------

def test_ade_bits_env(capsys, monkeypatch):
    monkeypatch.setenv("ADE_BITS", "200")
    out = run(capsys, "eval", "zeta", "--s", "2")[1]
    assert "(200 bits)" in out
    monkeypatch.setenv("ADE_BITS", "lots")
    assert run(capsys, "eval", "zeta", "--s", "2")[0] == 2
    monkeypatch.delenv("ADE_BITS")
    assert run(capsys, "eval", "zeta", "--s", "2", "--bits", "32")[0] == 2


def test_outputs_are_deterministic(capsys, det_file):
    for argv in (["eval", "zeta-jet", "--z", "0.75+50i", "--m", "3"],
                 ["decompose", det_file, "--ell", "3"],
                 ["scan", "--y", "30:35:0.5", "--m", "2"]):
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "adelab.cli", "expand", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "f' + f^2\n"
