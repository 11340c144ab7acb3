import csv
import io
import json
import subprocess
import sys

import pytest

from rnacci import bounds, identities, solver
from rnacci.cli import parse_range, run
from rnacci.sequence import params_for_k


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_term():
    assert call("term", "--r", "4", "--n", "10") == (0, "152\n")


def test_term_json():
    code, text = call("term", "--r", "6", "--n", "7", "--format", "json")
    assert code == 0 and json.loads(text) == {"r": 6, "n": 7, "value": 10}


def test_nu2_with_oracle():
    assert call("nu2", "--k", "2", "--n", "10", "--check-oracle") == (0, "3\n")
    assert call("nu2", "--k", "2", "--n", "0") == (0, "inf\n")


def test_nu2_json():
    code, text = call("nu2", "--k", "3", "--n", "14", "--check-oracle", "--format", "json")
    assert json.loads(text) == {"k": 3, "n": 14, "nu2": 4, "oracle": 4}


def test_legendre():
    assert call("legendre", "--p", "3", "--m", "10") == (0, "4 (lower 2, upper 9/2)\n")
    code, text = call("legendre", "--p", "2", "--m", "10", "--format", "json")
    assert json.loads(text) == {"p": 2, "m": 10, "exact": 8, "lower": "6", "upper": "9"}


def test_phi_json_round_trip():
    code, text = call("phi", "--r", "4", "--tol", "1e-6", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert list(data) == ["r", "lo", "hi", "midpoint"]
    assert abs(data["midpoint"] - 1.927562) < 2e-6
    assert json.dumps(data) + "\n" == text


def test_bounds_csv():
    code, text = call("bounds", "--k", "2..5", "--d", "1..10", "--format", "csv")
    assert code == 0
    assert "\r" not in text
    rows = list(csv.DictReader(io.StringIO(text)))
    assert text.splitlines()[0] == "k,d,m_max,n_sum_max"
    assert len(rows) == 40
    for row in rows:
        assert int(row["m_max"]) == bounds.REFERENCE_M_BOUNDS[int(row["k"])][int(row["d"]) - 1]


def test_bounds_json_matches_library():
    code, text = call("bounds", "--k", "2..3", "--d", "1..4", "--format", "json")
    data = json.loads(text)
    assert data == [row.to_json() for row in bounds.bounds_table(2, 3, 1, 4)]
    assert all(list(item) == ["k", "d", "m_max", "n_sum_max"] for item in data)
    assert json.dumps(data) + "\n" == text


def test_solve_json():
    code, text = call("solve", "--k", "2", "--d", "1", "--format", "json")
    assert code == 0
    assert json.loads(text) == [{"k": 2, "d": 1, "m": 3, "indices": [5]}]
    assert call("solve", "--k", "3", "--d", "2", "--format", "json") == (0, "[]\n")


def test_solve_plain():
    assert call("solve", "--k", "2", "--d", "1") == (0, "k=2 d=1: 3! = t_5\n")


def test_verify_json_schema():
    code, text = call("verify", "--k", "2..3", "--suite", "lemma31", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert [d["check"] for d in data] == ["det_b0_odd", "reduction_formula"] * 2
    for item in data:
        assert list(item) == ["check", "range", "passed", "counterexample"]
        assert item["passed"] is True and item["counterexample"] is None
    assert json.dumps(data) + "\n" == text


def test_verify_matches_library():
    code, text = call("verify", "--k", "2..2", "--suite", "super", "--format", "json")
    lib = identities.run_suite([2], identities.SuiteLimits(checks=frozenset({"super_formula"})))
    assert json.loads(text) == [r.to_json() for r in lib]


def test_verify_failure_exit_code(monkeypatch):
    bad = identities.VerificationReport("super_formula", "k=2", False, {"m": 1})
    monkeypatch.setattr(identities, "run_suite", lambda *a, **kw: [bad])
    code, text = call("verify", "--k", "2..2")
    assert code == 1 and text.startswith("FAIL")


@pytest.mark.parametrize("argv", [
    ["term", "--r", "1", "--n", "3"],
    ["term", "--r", "4"],
    ["nu2", "--k", "1", "--n", "3"],
    ["nu2", "--k", "2", "--n", "0", "--check-oracle"],
    ["bounds", "--k", "5..2", "--d", "1"],
    ["bounds", "--k", "2..x", "--d", "1"],
    ["solve", "--k", "2", "--d", "1", "--format", "csv"],
    ["phi", "--r", "4", "--tol", "0"],
    ["phi", "--r", "4", "--tol", "abc"],
    ["--threads", "0", "term", "--r", "4", "--n", "1"],
    ["frobnicate"],
    ["term", "--r", "4", "--n", "1", "--bogus"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, io.StringIO()) == 2
    assert capsys.readouterr().err


def test_parse_range():
    assert parse_range("2..5") == (2, 5)
    assert parse_range("3") == (3, 3)


def test_reproduce():
    code, text = call("reproduce")
    assert code == 0
    assert "FAIL" not in text
    assert "3! = t_5" in text


def test_reproduce_detects_table_mismatch(monkeypatch):
    altered = dict(bounds.REFERENCE_M_BOUNDS)
    altered[2] = (12,) + altered[2][1:]
    monkeypatch.setattr(bounds, "REFERENCE_M_BOUNDS", altered)
    code, text = call("reproduce")
    assert code == 1
    assert "k=2 d=1: computed 11, published 12" in text


def test_threads_option_after_subcommand():
    assert call("solve", "--k", "2", "--d", "1..2", "--threads", "2") == (0, "k=2 d=1: 3! = t_5\n")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rnacci.cli", "term", "--r", "4", "--n", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "6\n"
