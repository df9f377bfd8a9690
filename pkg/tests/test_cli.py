import csv
import io
import json
import subprocess
import sys

import pytest

from riccigini.cli import run
from riccigini.indicators import CANONICAL_ORDER, preset_csv_bytes

SCENARIO = {
    "coefficients": {"alpha_c": 0.0, "beta_c": -0.1, "gamma_c": 0.0, "delta_u": 0.0},
    "terms": {"adoption_level": 1.0, "gini_level": 0.5},
    "g0": 0.5,
    "span": [0, 1],
    "step": 0.5,
}


def cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "riccigini", *args], capture_output=True, text=True
    )


def call(*args):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(args), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def data_rows(text):
    return [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]


def test_table1_text_reproduce():
    result = cli("table1", "--mode", "reproduce", "--format", "text")
    assert result.returncode == 0
    assert result.stderr == ""
    lines = result.stdout.splitlines()
    assert any(l.startswith("productivity") and "11.0007463" in l and "2.397963" in l
               and "24.3" in l and l.rstrip().endswith("0.58") for l in lines)
    assert any(l.startswith("sum") and "32.39573" in l and "4.284181" in l for l in lines)
    assert "Provenance:" in result.stdout
    assert "recomputed sums" in result.stdout


def test_table1_json_full_precision():
    code, out, _ = call("table1", "--format", "json")
    doc = json.loads(out)
    assert doc["mode"] == "reproduce"
    assert len(doc["rows"]) == 17
    assert doc["rows"][1] == {"indicator": "productivity", "raw": "11.0007463",
                              "ln": 2.397963, "alpha_pct": 24.3, "ricci": 0.243 * 2.397963}
    assert doc["computed_sums"]["ricci"] == pytest.approx(4.285982, abs=1e-6)


def test_table1_faithful_uses_computed_sums(tmp_path):
    path = tmp_path / "d.csv"
    path.write_bytes(preset_csv_bytes())
    code, out, _ = call("table1", "--input", str(path), "--format", "csv")
    assert code == 0
    assert data_rows(out)[-1] == ["sum", "", "32.39571", "", "4.285982"]


def test_reproduce_with_input_is_usage_error(tmp_path):
    path = tmp_path / "d.csv"
    path.write_bytes(preset_csv_bytes())
    code, out, err = call("table1", "--mode", "reproduce", "--input", str(path))
    assert code == 2 and out == "" and "reproduce" in err


def test_wfunc_reproduce_discloses_overrides():
    code, out, _ = call("wfunc", "--format", "json")
    doc = json.loads(out)
    [row] = doc["rows"]
    assert row["w_value"] == pytest.approx(2797.93, abs=0.01)
    assert row["norm_mode"] == "override" and row["weight_mode"] == "override"
    assert any("override: weight 0.927" in n for n in doc["provenance"])
    assert any("normalization" in n and "1.01" in n for n in doc["provenance"])


def test_wfunc_faithful_options():
    code, out, _ = call("wfunc", "--mode", "faithful", "--tau", "1", "--n", "1", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row["norm_mode"] == "formula"
    assert row["tau"] == 1.0 and row["n_dim"] == 1


def test_wfunc_reproduce_rejects_numeric_options():
    code, out, err = call("wfunc", "--tau", "3")
    assert code == 2 and out == ""


def test_gini_rate_reproduce():
    code, out, _ = call("gini-rate", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row["total"] == pytest.approx(13219.85, abs=0.1)


def test_gini_rate_faithful_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(SCENARIO))
    code, out, _ = call("gini-rate", "--input", str(path), "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][0]["total"] == pytest.approx(-0.05)


def test_gini_rate_faithful_needs_input():
    code, _, err = call("gini-rate", "--mode", "faithful")
    assert code == 2 and "--input" in err


def test_sensitivity_csv_matches_table3():
    result = cli("sensitivity", "--slope", "-0.66", "--steps", "5:35:5", "--format", "csv")
    assert result.returncode == 0
    rows = data_rows(result.stdout)
    assert rows[0] == ["increase_pct", "gini_rate_change"]
    assert [r[1] for r in rows[1:]] == ["-3.30", "-6.60", "-9.90", "-13.20", "-16.50",
                                        "-19.80", "-23.10"]
    assert [float(r[0]) for r in rows[1:]] == [5, 10, 15, 20, 25, 30, 35]


def test_sensitivity_faithful_from_model():
    code, out, _ = call("sensitivity", "--mode", "faithful", "--steps", "5:10:5", "--format", "json")
    rows = json.loads(out)["rows"]
    assert rows[0]["gini_rate_change"] == pytest.approx(-2.86767, abs=1e-4)
    assert rows[1]["gini_rate_change"] == 2 * rows[0]["gini_rate_change"]


def test_sensitivity_bad_steps():
    assert call("sensitivity", "--steps", "5:x")[0] == 2


def test_simulate_csv(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(SCENARIO))
    code, out, _ = call("simulate", "--input", str(path), "--format", "csv")
    assert code == 0
    rows = data_rows(out)
    assert rows[0] == ["t", "G", "clamped"]
    assert [float(r[1]) for r in rows[1:]] == pytest.approx([0.5, 0.475, 0.45125])
    assert {r[2] for r in rows[1:]} == {"false"}


def test_simulate_span_override_and_curve(tmp_path):
    scenario = dict(SCENARIO, adoption={"eta": 1.0, "steepness": 1.0, "t_zero": 0.0})
    del scenario["terms"]["adoption_level"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(scenario))
    code, out, _ = call("simulate", "--input", str(path), "--span", "0:2", "--step", "1",
                        "--format", "json")
    doc = json.loads(out)
    assert [r["t"] for r in doc["rows"]] == [0.0, 1.0, 2.0]
    # A(0) = 0.5 for the printed orientation, so G1 = 0.5 - 0.1 * 0.5 * 0.5
    assert doc["rows"][1]["G"] == pytest.approx(0.475)


def test_simulate_requires_input():
    assert call("simulate")[0] == 2


def write_panel(path, gdp, **series):
    names = list(series)
    lines = ["year,gdp," + ",".join(names)]
    for k, g in enumerate(gdp):
        lines.append(f"{2014 + k},{g}," + ",".join(str(series[n][k]) for n in names))
    path.write_text("\n".join(lines) + "\n")


def test_calibrate_report(tmp_path):
    path = tmp_path / "panel.csv"
    gdp = [10 * k for k in range(1, 11)]
    write_panel(path, gdp, investment=[0.5 * g for g in gdp], inflation=[(-1) ** k for k in range(10)])
    code, out, err = call("calibrate", "--input", str(path), "--format", "csv")
    assert code == 0, err
    rows = data_rows(out)
    assert rows[0] == ["indicator", "slope", "intercept", "r2", "z", "p", "flags"]
    assert rows[1][0] == "investment" and rows[1][-1] == "above-band;significant"
    assert rows[2][0] == "inflation" and rows[2][-1].endswith("not-significant")


def test_calibrate_degenerate_exit_3(tmp_path):
    path = tmp_path / "panel.csv"
    write_panel(path, [5, 5, 5, 5], investment=[1, 2, 3, 4])
    result = cli("calibrate", "--input", str(path), "--format", "csv")
    assert result.returncode == 3
    assert "degenerate" in result.stderr
    assert data_rows(result.stdout)[1][-1] == "degenerate"


def test_calibrate_malformed_panel(tmp_path):
    path = tmp_path / "panel.csv"
    path.write_text("year,gdp,investment\n2014,1,abc\n")
    assert call("calibrate", "--input", str(path))[0] == 2


def test_preset_export_round_trip(tmp_path):
    code, out, _ = call("preset-export", "--format", "csv")
    assert out.encode() == preset_csv_bytes()
    out_path = tmp_path / "preset.json"
    code, out, _ = call("preset-export", "--format", "json", "--out", str(out_path))
    assert code == 0 and out == ""
    rows = json.loads(out_path.read_text())
    assert [r["indicator_id"] for r in rows] == [i.value for i in CANONICAL_ORDER]


def test_validate_preset_ok():
    code, out, _ = call("validate")
    assert code == 0 and ": ok" in out


def test_validate_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_bytes(b"")
    result = cli("validate", "--input", str(path))
    assert result.returncode == 2
    assert result.stdout == ""
    assert "0 of 16" in result.stderr


def test_validate_reports_alpha_violation(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(preset_csv_bytes().decode().replace("29.9,3.397858,0.217", "29.9,3.397858,2.0"))
    code, out, err = call("validate", "--input", str(path), "--format", "json")
    assert code == 2
    doc = json.loads(out)
    assert doc["ok"] is False
    failed = [r for r in doc["rows"] if not r["passed"]]
    assert [(r["indicator"], r["check"]) for r in failed] == [("innovation", "alpha_range")]
    assert "alpha_range" in err


def test_validate_json_input(tmp_path):
    _, out, _ = call("preset-export", "--format", "json")
    path = tmp_path / "preset.json"
    path.write_text(out)
    assert call("validate", "--input", str(path))[0] == 0


def test_malformed_dataset_exit_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("indicator_id,year,raw_value\nincome_distribution,2023,abc\n")
    code, out, err = call("table1", "--input", str(path))
    assert code == 2 and out == "" and "row 2" in err


def test_missing_file_exit_2(tmp_path):
    assert call("validate", "--input", str(tmp_path / "nope.csv"))[0] == 2


def test_byte_determinism():
    first = cli("table1", "--mode", "reproduce")
    second = cli("table1", "--mode", "reproduce")
    assert first.stdout.encode() == second.stdout.encode()
    assert first.stdout


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_every_reproduce_report_has_provenance(fmt):
    for command in ("table1", "wfunc", "gini-rate", "sensitivity"):
        _, out, _ = call(command, "--format", fmt)
        assert "reproduce" in out
