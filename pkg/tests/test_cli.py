import json
import math
import subprocess
import sys

import pytest

from pudq.cli import RunConfig, load_config, main, validate
from pudq.errors import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return [line.split(",") for line in text.strip().splitlines()]


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--params", "2,1,1", "--n-max", "1", "--m-max", "1", "-f", "csv")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["n", "m", "E", "E_float"]
    assert [r[:3] for r in rows[1:]] == [["0", "0", "1/2"], ["1", "0", "5/2"], ["0", "1", "-1/2"], ["1", "1", "3/2"]]


def test_spectrum_single_row(capsys):
    code, out, _ = run(capsys, "spectrum", "--params", "2,1", "--n-max", "0", "--m-max", "0", "-f", "csv")
    assert code == 0 and len(csv_rows(out)) == 2


def test_spectrum_negative_energies(capsys):
    code, out, _ = run(capsys, "spectrum", "--params", "3,2", "--n-max", "10", "--m-max", "10")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 121
    assert any(r[2].startswith("-") for r in doc["rows"])


def test_equal_frequency_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--params", "1,1,1", "--equal-frequency", "--m-max", "2", "-f", "csv")
    rows = csv_rows(out)
    assert code == 0 and rows[0] == ["m", "k", "E", "E_float"]
    assert ["2", "1", "7/4"] in [r[:3] for r in rows]
    code, _, err = run(capsys, "spectrum", "--params", "2,1", "--equal-frequency")
    assert code == 2 and "spectrum.equal_frequency" in err


def test_grid_origin_value(capsys):
    code, out, _ = run(capsys, "grid", "--params", "2,1,1", "--object", "pu-wigner", "--state", "0,0", "-f", "csv")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 2
    assert abs(float(rows[1][4]) - 1 / math.pi ** 2) < 1e-15


def test_grid_counting(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"object": "osc-psi", "axes": {"X1": [-1, 1, 3], "X2": [-1, 1, 3]}}, "format": "csv"}))
    code, out, _ = run(capsys, "grid", "--config", str(cfg))
    assert code == 0 and len(out.strip().splitlines()) == 10


def test_grid_equal_frequency_errors(capsys):
    code, _, err = run(capsys, "grid", "--params", "1,1", "--object", "pu-psi")
    assert code == 1 and "NonNormalizableError" in err and "growth" in err
    code, _, err = run(capsys, "grid", "--params", "1,1", "--object", "pu-wigner")
    assert code == 1 and "SingularParametersError" in err


def test_transform_diagonalize(capsys):
    code, out, _ = run(capsys, "transform", "--params", "5,3", "--kind", "diagonalize")
    doc = json.loads(out)
    assert code == 0 and doc["pullback_matches_target"] and doc["symplectic"]
    assert doc["pullback"] == doc["target"]
    assert doc["generator"]["mixed_hessian"] == [["20", "0"], ["0", "4"]]
    code, _, err = run(capsys, "transform", "--params", "1,1", "--kind", "diagonalize")
    assert code == 1 and "omega" in err


def test_transform_equal_frequency(capsys):
    code, out, _ = run(capsys, "transform", "--params", "1,1", "--kind", "equal-frequency")
    doc = json.loads(out)
    assert code == 0 and doc["pullback_matches_target"] and doc["symplectic"]
    code, out, _ = run(capsys, "transform", "--params", "1,1", "--kind", "equal-frequency", "--variant", "printed")
    doc = json.loads(out)
    assert doc["symplectic"] and not doc["pullback_matches_target"]


def test_transform_identity(capsys):
    code, out, _ = run(capsys, "transform", "--params", "1,1", "--kind", "identity")
    assert code == 0 and json.loads(out)["symplectic"]


def test_verify_subset_and_negative_control(capsys):
    code, out, err = run(capsys, "verify", "--params", "2,1,1", "--checks", "star_genvalue,charge_brackets")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["J1_J2"] == "0"
    assert "star_genvalue" in err
    code, out, err = run(capsys, "verify", "--params", "2,1,1", "--checks", "star_genvalue", "--wrong-energy")
    assert code == 1 and json.loads(out)["failed"] == ["star_genvalue"]
    assert "failing checks: star_genvalue" in err


def test_config_errors_name_the_field(tmp_path, capsys):
    for raw, field in [
        ({"spectrum": {"n_max": -1}}, "spectrum.n_max"),
        ({"grid": {"object": "nope"}}, "grid.object"),
        ({"grid": {"axes": {"zz": 1}}}, "grid.axes.zz"),
        ({"params": "1"}, "params"),
        ({"colour": 1}, "colour"),
        ({"transform": {"kind": "diagonalize", "variant": "complex"}}, "transform.variant"),
    ]:
        with pytest.raises(ConfigError) as info:
            validate(raw)
        assert info.value.field == field
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "spectrum", "--config", str(bad))
    assert code == 2 and "--config" in err
    code, _, err = run(capsys, "spectrum", "--params", "a,b")
    assert code == 2 and "params" in err


def test_config_round_trip():
    cfg = validate({"params": "5/2,3/2,1/3", "format": "csv", "grid": {"object": "osc-wigner", "state": [1, 2]}})
    again = validate(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg
    assert load_config(None) == RunConfig()


def test_no_partial_output_on_error(tmp_path, capsys):
    out = tmp_path / "o.csv"
    code, _, _ = run(capsys, "grid", "--params", "1,1", "--object", "pu-psi", "-o", str(out))
    assert code == 1 and not out.exists()
    code, _, _ = run(capsys, "spectrum", "--params", "2,1", "-o", str(out))
    assert code == 0 and out.read_text().startswith("{")


def test_usage_error_exit_code(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["grid", "--object", "nope"]) == 2


def test_console_entry_is_deterministic(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"params": "4,1,1", "format": "csv", "grid": {"object": "pu-psi", "state": [1, 1], "axes": {"q": [-1, 1, 5], "x": [-1, 1, 4]}}}))
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.csv"
        r = subprocess.run([sys.executable, "-m", "pudq.cli", "grid", "--config", str(cfg), "-o", str(path)], capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0].count(b"\n") == 21
