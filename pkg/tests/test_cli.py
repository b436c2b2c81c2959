import csv
import io
import json
import subprocess
import sys

import pytest

from lowaccess.cli import CSV_FIELDS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_radius_reports(capsys):
    code, out, _ = run(capsys, "radius", "--catalog", "hamming_3")
    assert code == 0
    assert "r=1 normal=false" in out
    code, out, _ = run(capsys, "radius", "--catalog", "expanded_hamming", "--format", "json")
    report = json.loads(out)
    assert report["r"] == 1 and report["normal"] and 5 in report["acceptable_coordinates"]
    code, out, _ = run(capsys, "radius", "--catalog", "entire_space", "--i", "2", "--format", "json")
    assert json.loads(out)["r"] == 0


def test_radius_from_code_file(capsys, tmp_path):
    path = tmp_path / "rep.code"
    path.write_text("3 3\n000\n111\n222\n")
    code, out, _ = run(capsys, "radius", "--code-file", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["r"] == 2


def test_catalog_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "hamming_3")
    assert code == 0
    path = tmp_path / "h.code"
    path.write_text(out)
    code, out, _ = run(capsys, "reduce", "--code-file", str(path), "--format", "json")
    assert json.loads(out)["tilde_size"] == 4
    code, out, _ = run(capsys, "catalog")
    assert "amalgam (needs --i)" in out


def test_exit_codes(capsys, tmp_path, monkeypatch):
    bad = tmp_path / "bad.code"
    bad.write_text("3 2\n01\n0\n")
    assert run(capsys, "radius", "--code-file", str(bad))[0] == 2
    assert run(capsys, "radius", "--code-file", str(tmp_path / "missing"))[0] == 2
    assert run(capsys, "radius", "--catalog", "repetition")[0] == 2
    assert run(capsys, "tradeoff", "--i-range", "5..2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["radius", "--catalog", "golay"])
    assert exc.value.code == 2
    monkeypatch.setenv("LOWACCESS_ENUM_BOUND", "10")
    assert run(capsys, "radius", "--catalog", "hamming_3")[0] == 3


def test_tradeoff_csv(capsys):
    code, out, _ = run(capsys, "tradeoff", "--family", "all")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(CSV_FIELDS)
    pairs = {(r["alpha_num"], r["alpha_den"], r["beta_num"], r["beta_den"]) for r in rows}
    assert ("2", "1", "1", "2") in pairs
    assert ("1", "1", "2", "3") in pairs
    amalgam3 = next(r for r in rows if r["construction"] == "amalgam(3)")
    assert amalgam3["tilde_size"] == "13"


def test_tradeoff_generic_and_envelope(capsys):
    code, out, _ = run(capsys, "tradeoff", "--family", "hamming_3", "--scheme", "generic", "--format", "json")
    rows = json.loads(out)
    assert (rows[0]["alpha_num"], rows[0]["alpha_den"]) == (13, 4)
    code, out, _ = run(capsys, "tradeoff", "--family", "repetition", "--i-range", "1..6", "--envelope")
    # every finite repetition point lies above and right of the limit point
    assert "interpolated" not in out
    code, out, _ = run(capsys, "tradeoff", "--envelope")
    midpoint = next(r for r in csv.DictReader(io.StringIO(out)) if r["theorem"] == "interpolated")
    assert (midpoint["alpha_num"], midpoint["alpha_den"], midpoint["beta_num"], midpoint["beta_den"]) == (
        "3", "2", "7", "12")


def test_simulate_routes(capsys):
    for coeffs, route in (("-1,0,1", "thm2"), ("2,5,8", "prop1"), ("0..8", "thm3")):
        code, out, _ = run(capsys, "simulate", "--catalog", "hamming_3", "--k", "40",
                           f"--coeff-set={coeffs}", "--trials", "20", "--seed", "4")
        summary = json.loads(out)
        assert code == 0
        assert summary["route"] == route and summary["matches"] == 20
        assert summary["max_ell"] <= summary["ell_bound"]


def test_simulate_trace_and_determinism(capsys, tmp_path):
    base = ["simulate", "--catalog", "repetition", "--i", "4", "--k", "30", "--coeff-set=0..4",
            "--trials", "5", "--seed", "99", "--float-data"]
    argv = base + ["--trace", "-"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    lines = first[1].splitlines()
    assert len(lines) == 6
    record = json.loads(lines[0])
    assert record["query_id"] == 0 and record["match"]
    path = tmp_path / "trace.jsonl"
    run(capsys, *base, "--trace", str(path))
    assert len(path.read_text().splitlines()) == 5


def test_complexity_command(capsys):
    for text, p, theta in (("0..8", 3, 2), ("0..8", 2, 4), ("-1,0,1", 3, 1)):
        code, out, _ = run(capsys, "complexity", f"--set={text}", "--p", str(p))
        data = json.loads(out)
        assert code == 0 and data["theta"] == theta and data["status"] == "optimal-in-space"
    assert run(capsys, "complexity", "--set", "x", "--p", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lowaccess", "radius", "--catalog", "hamming_3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "r=1" in proc.stdout
