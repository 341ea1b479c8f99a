import csv
import io
import json
import subprocess
import sys

import pytest

from quadwaring.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_generate_writes_certificate(tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run("generate", "--n", "5", "--s", "3", "--output", str(path), "--verify")
    assert code == 0
    assert "size 45" in out
    cert = json.loads(path.read_text())
    assert cert["meta"]["size"] == 45 and cert["n"] == 5 and cert["s"] == 3


def test_generate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("generate", "--n", "4", "--s", "3", "--seed", "7", "--strategy", "random", "-o", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_to_stdout():
    code, out, err = run("generate", "--n", "3", "--s", "2", "-o", "-")
    assert code == 0
    assert json.loads(out)["meta"]["size"] == 9
    assert "size 9" in err


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QUADWARING_OUTPUT_DIR", str(tmp_path))
    assert run("generate", "--n", "3", "--s", "2", "--seed", "1")[0] == 0
    assert (tmp_path / "q_n3_s2_seed1.json").exists()
    assert run("builtin", "s3", "--n", "5")[0] == 0
    assert (tmp_path / "s3_n5.json").exists()


def test_verify_ok_and_tampered(tmp_path):
    path = tmp_path / "c.json"
    run("builtin", "s4-real", "--n", "4", "-o", str(path))
    code, out, _ = run("verify", str(path))
    assert code == 0 and "ok" in out
    assert run("verify", str(path), "--numeric", "--tol", "1e-30")[0] == 0
    cert = json.loads(path.read_text())
    cert["terms"][0]["weight"] = "2"
    path.write_text(json.dumps(cert))
    code, out, _ = run("verify", str(path))
    assert code == 1
    assert "mismatch at x^[" in out


def test_verify_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1,')
    code, _, err = run("verify", str(bad))
    assert code == 1 and "line" in err
    bad.write_text('{"version": 9}')
    assert run("verify", str(bad))[0] == 1
    assert run("verify", str(tmp_path / "missing.json"))[0] == 2
    good = tmp_path / "g.json"
    run("builtin", "s2", "--n", "3", "-o", str(good))
    assert run("verify", str(good), "--numeric", "--tol", "0")[0] == 2


def test_bounds():
    code, out, _ = run("bounds", "--n", "12", "--s", "3")
    assert code == 0
    assert "subgeneric: true" in out
    code, out, _ = run("bounds", "--n", "11", "--s", "3", "--format", "json")
    row = json.loads(out)[0]
    assert row["subgeneric"] is False and row["upper11"] == 4 * 165 + 2 * 55 + 11


def test_table_csv(tmp_path):
    code, out, _ = run("table", "--n", "3:5", "--s", "2:3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "s", "lower", "upper11", "upper42", "generic_exact_num",
                       "generic_exact_den", "subgeneric"]
    assert len(rows) == 1 + 6
    assert rows[1][:3] == ["3", "2", "6"]
    path = tmp_path / "t.txt"
    assert run("table", "--n", "4", "--s", "2", "--format", "text", "-o", str(path))[0] == 0
    assert "upper42" in path.read_text()


def test_closed_form():
    code, out, _ = run("closed-form", "--s", "3")
    assert code == 0
    assert out.startswith("60*q_n^3 =")
    code, out, _ = run("closed-form", "--s", "2", "--format", "json")
    payload = json.loads(out)
    assert payload["scale"] == "6" and len(payload["terms"]) == 2
    assert run("closed-form", "--s", "8")[0] == 2


def test_builtin_errors():
    assert run("builtin", "q8s2", "--n", "7")[0] == 2
    assert run("builtin", "nope", "--n", "3")[0] == 2
    assert run("builtin", "q8s2", "--n", "8", "-o", "-", "--verify")[0] == 0


def test_usage_errors():
    assert run()[0] == 2
    assert run("generate", "--n", "0", "--s", "2")[0] == 2
    assert run("table", "--n", "5:3", "--s", "2")[0] == 2
    assert run("check-paper", "--only", "x")[0] == 2
    assert run("check-paper", "--only", "13")[0] == 2


def test_check_paper_subset():
    code, out, _ = run("check-paper", "--only", "3,5")
    assert code == 0
    assert "2/2 criteria passed" in out


def test_check_paper_reports_failure():
    code, out, _ = run("check-paper", "--only", "1")
    assert code == 1
    assert "[FAIL]" in out and "reference" in out and "918" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quadwaring", "bounds", "--n", "4", "--s", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "lower: 10" in res.stdout
