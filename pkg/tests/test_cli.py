import csv
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from pinchlab.cli import RunConfig, ConfigError, main

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# --- configuration ---------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"l": 0, "m": 0}, {"family": 2, "n": 2, "w": 1.0}, {"b": 0.0},
                                {"family": 2, "n": 1}, {"family": 2, "a": 5.0},
                                {"r_range": (1.0, 1.0)},
                                {"grid": 1}, {"threads": 0}, {"r_min": 0.0}, {"family": 3}])
def test_run_config_rejects(kw):
    with pytest.raises(ConfigError):
        RunConfig(**kw).validate()


def test_run_config_box():
    box = RunConfig(scan_grid=5).validate().box
    assert box.size == 25
    flat = RunConfig(flat=True, n=3, scan_grid=4).validate().box
    assert set(flat.to_dict()["bounds"]) == {"x_1", "x_2"}


# --- exit codes ------------------------------------------------------------------

def test_verify_bad_config_exits_2(capsys):
    code, out, err = run(["verify", "--family", "1", "--l", "0", "--m", "0"], capsys)
    assert code == 2 and "l + m >= 1" in err and out == ""


def test_unknown_option_exits_2(capsys):
    assert run(["scan", "--bogus"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


def test_help_exits_0(capsys):
    assert run(["--help"], capsys)[0] == 0


def test_verify_family1_default(capsys):
    code, out, err = run(["verify", "--family", "1", "--l", "1", "--m", "1"], capsys)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, schema("verify_report"))
    assert doc["passed"] and all(c["passed"] for c in doc["checks"])
    assert err.count("PASS") == len(doc["checks"])


def test_verify_family2_default(capsys):
    code, out, err = run(["verify", "--family", "2", "--n", "3", "--a", "7"], capsys)
    assert code == 0, err
    jsonschema.validate(json.loads(out), schema("verify_report"))


# --- scan ----------------------------------------------------------------------------

def test_scan_flat_is_zero(capsys):
    code, out, _ = run(["scan", "--flat", "--n", "4", "--scan-grid", "6"], capsys)
    doc = json.loads(out)
    assert code == 0
    jsonschema.validate(doc, schema("scan_report"))
    assert doc["report"]["min_K"] == 0.0 and doc["report"]["max_K"] == 0.0


def test_scan_family1_negative(capsys):
    code, out, _ = run(["scan", "--scan-grid", "16", "--planes", "8"], capsys)
    assert code == 0 and json.loads(out)["report"]["max_K"] < 0


def test_scan_bit_identical_and_thread_independent(tmp_path, capsys):
    args = ["scan", "--family", "2", "--n", "3", "--scan-grid", "12", "--planes", "6",
            "--seed", "11", "-q"]
    outs = []
    for i, threads in enumerate(("1", "1", "4")):
        p = tmp_path / f"s{i}.json"
        assert main(args + ["--threads", threads, "-o", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert capsys.readouterr().out == ""


def test_scan_threads_env(monkeypatch, tmp_path):
    args = ["scan", "--scan-grid", "8", "--planes", "3", "-q"]
    monkeypatch.setenv("PINCHLAB_THREADS", "3")
    assert main(args + ["-o", str(tmp_path / "a.json")]) == 0
    monkeypatch.setenv("PINCHLAB_THREADS", "1")
    assert main(args + ["-o", str(tmp_path / "b.json")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_scan_csv(tmp_path):
    p = tmp_path / "k.csv"
    assert main(["scan", "--family", "2", "--n", "3", "--scan-grid", "3", "--planes", "2",
                 "--w", "0.5", "-q", "--csv", str(p)]) == 0
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["r", "t", "w", "plane", "K"]
    body = rows[1:]
    assert len(body) == 9 * (10 + 2)
    assert {r[2] for r in body} == {"0.5"}
    assert all(float(r[4]) < 0 for r in body)
    assert "r^t" in {r[3] for r in body} and "random_1" in {r[3] for r in body}


def test_scan_csv_flat_columns(tmp_path):
    p = tmp_path / "k.csv"
    assert main(["scan", "--flat", "--n", "3", "--scan-grid", "2", "--planes", "0", "-q",
                 "--csv", str(p)]) == 0
    body = list(csv.reader(p.open()))[1:]
    assert len(body) == 4 * 3 and {float(r[4]) for r in body} == {0.0}


# --- volume ---------------------------------------------------------------------------

def test_volume_cusp(capsys):
    code, out, _ = run(["volume", "--l", "2", "--m", "1"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("volume_report"))
    assert code == 0 and doc["result"]["margin"] > 0


def test_volume_piece_and_family2(capsys):
    code, out, _ = run(["volume", "--kind", "piece", "--L", "2"], capsys)
    assert code == 0 and json.loads(out)["result"]["bound"] == pytest.approx(16 * 2.718281828459045)
    code, out, _ = run(["volume", "--family", "2", "--n", "3"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("volume_report"))
    assert code == 0 and doc["result"]["bound"] is None


def test_volume_needs_rho_circle(capsys):
    assert run(["volume", "--l", "0", "--m", "1"], capsys)[0] == 2


# --- gluing ----------------------------------------------------------------------------

@pytest.mark.parametrize("name,code", [("flat_seifert", 0), ("non_flip", 0), ("bad_lengths", 1)])
def test_gluing_examples(name, code, capsys):
    got, out, _ = run(["gluing", f"examples/{name}.json"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("gluing_report"))
    assert got == code
    if code:
        assert doc["failure_classes"] == ["length_mismatch"]


def test_gluing_schema_error_exits_2(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"pieces": [], "edges": 3}))
    assert run(["gluing", str(p)], capsys)[0] == 2
    assert run(["gluing", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pinchlab", "gluing", "non_flip", "-q"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
