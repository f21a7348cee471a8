import csv
import json
import subprocess
import sys

import pytest

from landau_mra.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def bad_filter(tmp_path):
    p = tmp_path / "bad.flt"
    p.write_text("d=2\n0 1 0\n1 1 0\n")
    return p


def test_validate(capsys, bad_filter):
    code, out, _ = run(capsys, "validate", "--builtin", "haar3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "validate", "--file", str(bad_filter))
    assert code == 1 and json.loads(out)["validation"]["max_residual"] == 1.0
    code, _, _ = run(capsys, "validate", "--builtin", "haar2", "--tol", "1e-15")
    assert code == 0
    code, out, _ = run(capsys, "validate", "--builtin", "haar_d", "--filter-d", "9")
    assert code == 0 and json.loads(out)["sum_rule_residual"] < 1e-14


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "--file", "/nonexistent/x.flt"],
        ["validate", "--builtin", "daub9"],
        ["validate"],
        ["frobnicate"],
        [],
        ["--threads", "0", "wigner"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "broken.flt"
    p.write_text("d=2\n0 1\n")
    code, _, err = run(capsys, "validate", "--file", str(p))
    assert code == 2 and "line 2" in err


def test_onc_and_zak(capsys):
    code, out, _ = run(capsys, "onc-check", "--builtin", "haar3", "--nmax", "2", "--mmax", "2")
    res = json.loads(out)
    assert code == 0 and res["max_deviation"] < 1e-8
    code, out, _ = run(capsys, "zak-check", "--builtin", "haar3", "--grid", "64")
    assert code == 0 and json.loads(out)["max_deviation"] < 1e-10
    code, out, _ = run(capsys, "zak-check", "--builtin", "haar2", "--shape", "square")
    assert code == 0


def test_onc_fails_for_invalid_filter(capsys, bad_filter):
    code, out, _ = run(capsys, "onc-check", "--file", str(bad_filter), "--nmax", "1", "--mmax", "1")
    assert code == 1 and json.loads(out)["max_deviation"] >= 0.999


def test_synthesize_csv(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LANDAU_MRA_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "synthesize", "--builtin", "haar3", "--step", "1", "--xmin", "-2", "--xmax", "2",
                     "--ymin", "-1", "--ymax", "1", "-o", "field.csv")
    assert code == 0
    rows = list(csv.reader((tmp_path / "field.csv").open()))
    assert rows[0] == ["x", "y", "re", "im", "abs"] and len(rows) == 1 + 5 * 3
    # 17 significant digits
    assert any(len(v.replace("-", "").replace(".", "").lstrip("0")) >= 16 for v in rows[5][2:])


def test_synthesize_json_replay(capsys, tmp_path):
    out = tmp_path / "f.json"
    code, _, _ = run(capsys, "synthesize", "--builtin", "haar3", "--translate", "1", "3", "--format", "json", "-o", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["translate"] == [1, 3]
    again = tmp_path / "g.json"
    assert run(capsys, "--replay", str(out), "-o", str(again))[0] == 0
    assert again.read_text() == out.read_text()


def test_synthesize_bad_grid(capsys):
    assert run(capsys, "synthesize", "--builtin", "haar3", "--step", "0")[0] == 2


@pytest.mark.parametrize("threads", ["1", "2", "8"])
def test_coulomb_bit_identical(capsys, tmp_path, threads):
    base = tmp_path / "base.json"
    args = ["coulomb", "--builtin", "haar3", "--points", "3000", "--radius", "2.1", "--seed", "42"]
    assert run(capsys, *args, "-o", str(base))[0] == 0
    other = tmp_path / f"t{threads}.json"
    assert run(capsys, "--threads", threads, *args, "-o", str(other))[0] == 0
    assert other.read_bytes() == base.read_bytes()
    replay = tmp_path / "replay.json"
    assert run(capsys, "--replay", str(base), "--threads", threads, "-o", str(replay))[0] == 0
    assert replay.read_bytes() == base.read_bytes()


def test_coulomb_report_and_pairs(capsys, tmp_path):
    pairs = tmp_path / "pairs.csv"
    code, out, err = run(capsys, "coulomb", "--builtin", "haar3", "--points", "2000", "--radius", "1.5",
                         "--exchange", "--pairs-csv", str(pairs))
    assert code == 0 and "in-box norm" in err
    res = json.loads(out)
    assert {"delta_E", "delta_E_stderr", "E_W", "total", "kinetic"} <= set(res)
    assert res["provenance"]["include_exchange"] is True
    rows = list(csv.DictReader(pairs.open()))
    assert [(r["n"], r["m"]) for r in rows] == [("-1", "0"), ("1", "0")]


def test_wigner(capsys):
    code, out, _ = run(capsys, "wigner", "--nu", "1")
    assert code == 0 and abs(json.loads(out)["coefficient"] + 0.7821) < 5e-4
    assert run(capsys, "wigner", "--nu", "1.5")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "landau_mra", "wigner"], capture_output=True, text=True)
    assert proc.returncode == 0 and "E_W" in proc.stdout
