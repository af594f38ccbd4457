from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from coxstat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_main_b_json(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "main_B", "--n-max", "3",
                       "--t-cap", "4", "--output", "json")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass" and report["first_mismatch"] is None
    assert report["params"]["caps"]["a"] == 3
    assert report["conventions"] == {"bernoulli": "B1=-1/2", "inv": "i<j", "sgn0": "+"}


def test_encode_example(capsys):
    code, out, _ = run(capsys, "encode", "--sequence", "(-4,4,1,-3,6,3,-4)")
    assert code == 0
    assert "beta = [3,-4,6,-7,-1,2,5]" in out and "lambda = (1,2,2,2,2,2,4)" in out


def test_encode_d_variant(capsys):
    code, out, _ = run(capsys, "encode", "--sequence", "(0,-3,-4)", "--d-variant",
                       "--output", "json")
    assert code == 0
    assert json.loads(out) == {"beta": "[1,-2,-3]", "sequence": "(-1,1,1)", "valid": False}


def test_encode_inverse(capsys):
    code, out, _ = run(capsys, "encode", "--window", "[5,-3,1,2,-4]", "--partition", "(0,2,2,3,3)")
    assert code == 0 and out.strip() == "f = (3,4,-3,-5,0)"


@pytest.mark.parametrize("argv", [
    ["encode", "--sequence", "(1,2"],
    ["encode", "--window", "[1,1]", "--partition", "(0,0)"],
    ["encode", "--window", "[1,2]"],
])
def test_encode_bad_input(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("coxstat:")


def test_dist(capsys):
    code, out, _ = run(capsys, "dist", "--group", "D", "--n", "2", "--stats", "des_D")
    assert code == 0 and out.strip() == "1 + 2t + t^2"


def test_dist_csv(capsys):
    code, out, _ = run(capsys, "dist", "--group", "B", "--n", "1", "--stats", "des_B", "neg",
                       "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["t", "q", "p", "a", "coeff"], ["0", "0", "0", "0", "1/1"],
                    ["1", "0", "0", "1", "1/1"]]


def test_stats_csv(capsys):
    code, out, _ = run(capsys, "stats", "--group", "D", "--n", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 24
    assert list(rows[0]) == ["window", "inv", "neg", "len_b", "des_b", "maj", "fmaj",
                             "d_r", "maj_r", "des_d", "len_d", "class"]
    by_window = {r["window"]: r for r in rows}
    assert by_window["[-1,2,-3]"]["class"] == "Plus"
    assert by_window["[2,-3,-1]"]["class"] == "Minus"


def test_stats_b_has_no_d_columns(capsys):
    _, out, _ = run(capsys, "stats", "--group", "B", "--n", "2")
    header = out.splitlines()[0]
    assert header == "window,inv,neg,len_b,des_b,maj,fmaj,d_r,maj_r"
    assert len(out.splitlines()) == 9


def test_unknown_identity(capsys):
    code, _, err = run(capsys, "verify", "--identity", "nope")
    assert code == 2 and "unknown identity" in err


def test_caps_below_minimum(capsys):
    code, out, err = run(capsys, "verify", "--identity", "main_B", "--n-max", "3",
                         "--t-cap", "4", "--cap-q", "5")
    assert code == 2 and out == "" and "below the inferred minimum" in err


def test_caps_override_above_minimum(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "cg26", "--n-max", "2", "--t-cap", "2",
                       "--cap-q", "12", "--output", "json")
    assert code == 0 and json.loads(out)["params"]["caps"]["q"] == 12


def test_verify_single_rank(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "prop31_pointwise", "--n", "5")
    assert code == 0 and "checked=3840" in out


def test_diagnostic_does_not_fail(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "brenti_D_diag")
    assert code == 0 and "DIAGNOSTIC" in out and "reconciling constant" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "--identity", "carlitz", "--output", "csv",
                       "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("identity,status,n_min,n_max,checked,wall_ms\ncarlitz,pass")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coxstat", "dist", "--n", "1", "--stats", "neg"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "1 + a"


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("COXSTAT_THREADS", "zero")
    code, _, err = run(capsys, "verify-all")
    assert code == 2 and "COXSTAT_THREADS" in err
