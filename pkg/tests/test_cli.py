"""Command line: reports, exit codes, decimal output and batch tables."""
import json
import subprocess
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

from wdist.cli import dec, parse_matrix_doc, parse_rational, run
from wdist.errors import MalformedInput
from wdist.gallery import EXPLICIT_MATRICES, F3_POLY

SRC = str(Path(__file__).resolve().parents[1] / "src")


def _run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run(list(argv) + ["--out", str(out)])
    return code, json.loads(out.read_text())


def _write(tmp_path, doc, name="A.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_frank3_real(tmp_path):
    code, rep = _run(["--gen", "frank:3", "--mode", "real", "--digits", "40"], tmp_path)
    assert code == 0
    assert rep["status"] == "CERTIFIED_RANK1_MINIMUM"
    real = rep["real"]
    assert abs(float(real["d"]) - 0.191004) < 1e-6 and len(real["d"]) == 42
    assert real["equation"]["coefficients"] == [str(c) for c in F3_POLY]
    assert real["equation"]["denominator"] == "1"
    assert [z["exact"] for z in real["zero_inventory"]][-1] == "27/4"
    assert all(c["passed"] for c in real["verification"])
    assert len(real["E_star"]) == 3


def test_report_is_reproducible(tmp_path):
    argv = ["--gen", "kahan:5", "--mode", "both", "--digits", "30"]
    _, a = _run(argv, tmp_path, "a.json")
    _, b = _run(argv, tmp_path, "b.json")
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a) == json.dumps(b)


def test_equation_only(tmp_path):
    code, rep = _run(["--gen", "frank:3", "--mode", "equation-only"], tmp_path)
    assert code == 0 and rep["status"] == "OK"
    assert rep["equation"]["coefficients"] == [str(c) for c in F3_POLY]
    assert rep["f_tilde"]["degree"] == 3
    assert "zero_inventory" not in rep


def test_localize_from_file(tmp_path):
    path = _write(tmp_path, {"n": 3, "entries": EXPLICIT_MATRICES["localize3"], "label": "loc"})
    for z0, v in (("2/5", 0), ("1/2", 1), ("0.5", 1), ("9/4", 0)):
        code, rep = _run(["--in", path, "--mode", "localize", "--z0", z0], tmp_path)
        assert code == 0
        assert rep["variations_at_z0"] == v
        assert rep["input"]["label"] == "loc"
        assert "zero_inventory" not in rep


def test_complex_mode_companion(tmp_path):
    code, rep = _run(["--gen", "explicit:companion3", "--mode", "complex", "--digits", "30"], tmp_path)
    assert code == 0
    assert rep["status"] == "COMPLEX_BRANCH"
    assert rep["complex"]["d_C"].startswith("0.03502640533567668177154315")
    assert rep["complex"]["f_tilde"]["degree"] == 3


def test_complex_mode_symmetric(tmp_path):
    path = _write(tmp_path, [[2, 1, 0], [1, 3, 1], [0, 1, 5]])
    code, rep = _run(["--in", path, "--mode", "complex", "--digits", "20"], tmp_path)
    assert code == 0
    assert rep["complex"]["winner"] == "REAL_BRANCH"
    assert rep["complex"]["degenerate"]


def test_defective_input_is_ok(tmp_path):
    path = _write(tmp_path, [[1, 0], [0, 1]])
    code, rep = _run(["--in", path], tmp_path)
    assert code == 0 and rep["status"] == "INPUT_DEFECTIVE" and rep["real"]["d"] == "0"


@pytest.mark.parametrize("doc", [
    [[1, 2], [3]],
    {"entries": [[1.5, 2], [3, 4]]},
    {"n": 3, "entries": [[1, 2], [3, 4]]},
    {"rows": [[1]]},
    [["x", 1], [2, 3]],
])
def test_malformed_files_exit_1(tmp_path, doc):
    code, rep = _run(["--in", _write(tmp_path, doc)], tmp_path)
    assert code == 1 and rep["status"] == "ERROR" and rep["error"] == "MALFORMED_INPUT"


def test_bad_arguments_exit_1(tmp_path):
    assert run(["--gen", "nothing:3"]) == 1
    assert run(["--gen", "frank:3", "--digits", "3"]) == 1
    assert run(["--gen", "frank:3", "--mode", "sideways"]) == 1
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["--in", str(p)]) == 1
    code, rep = _run(["--gen", "frank:3", "--mode", "localize"], tmp_path)
    assert code == 1


def test_computation_error_exit_2(tmp_path):
    path = _write(tmp_path, [[1, 0], [0, 1]])
    code, rep = _run(["--in", path, "--mode", "localize", "--z0", "1/2"], tmp_path)
    assert code == 2 and rep["error"] == "INPUT_DEFECTIVE"


def test_candidate_only_is_exit_0(tmp_path):
    code, rep = _run(["--gen", "epsilon:eps=1/2", "--digits", "20"], tmp_path)
    assert code == 0
    assert rep["status"] == "CANDIDATE_ONLY_MULTIPLE_ZERO"


@pytest.mark.parametrize("x, digits, expected", [
    (Fraction(125, 1000), 2, "0.12"),
    (Fraction(135, 1000), 2, "0.14"),
    (Fraction(1, 3), 5, "0.33333"),
    (Fraction(-2, 3), 4, "-0.6667"),
    (Fraction(27, 4), 3, "6.75"),
    (Fraction(0), 7, "0"),
])
def test_dec_round_half_even(x, digits, expected):
    assert dec(x, digits) == expected


def test_dec_digits_exact():
    with mpmath.workdps(60):
        s = dec(mpmath.sqrt(2), 40)
    digits = s.replace(".", "").lstrip("0")
    ref = Context(prec=40, rounding=ROUND_HALF_EVEN).sqrt(Decimal(2))
    assert len(digits) == 40 and s == str(ref)


def test_parse_rational():
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("-3/7") == Fraction(-3, 7)
    assert parse_rational(5) == 5
    for bad in (0.5, True, None, "1/0", "abc"):
        with pytest.raises(MalformedInput):
            parse_rational(bad)
    M, label = parse_matrix_doc({"n": 2, "entries": [["1/2", 0], [0, "1e-3"]], "label": "x"})
    assert M[1][1] == Fraction(1, 1000) and label == "x"


def test_batch_json(tmp_path):
    out = tmp_path / "b.json"
    assert run(["batch", "frank", "--n", "3..6", "--format", "json", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["rows"]
    assert [r["n"] for r in rows] == [3, 4, 5, 6]
    d = [float(r["d"]) for r in rows]
    assert d == sorted(d, reverse=True)
    assert rows[2]["real_zeros"] == 12 and rows[2]["d"] == "0.004499951"


def test_batch_table_epsilon(tmp_path):
    out = tmp_path / "eps.txt"
    assert run(["batch", "epsilon", "--eps", "1/2,2,100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert all("CANDIDATE_ONLY_MULTIPLE_ZERO" in ln for ln in lines[1:])


def test_batch_bad_family():
    assert run(["batch", "nothing"]) == 1


def test_module_entry_point(tmp_path):
    env = {"PYTHONPATH": SRC}
    r = subprocess.run([sys.executable, "-m", "wdist", "--gen", "frank:3", "--digits", "12"],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0
    d = json.loads(r.stdout)["real"]["d"]
    assert len(d) == 14 and abs(float(d) - 0.191004) < 1e-6
    assert "status=CERTIFIED_RANK1_MINIMUM" in r.stderr
