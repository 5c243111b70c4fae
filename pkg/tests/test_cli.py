"""Tests for the command line front end."""

import json
import math
import re
import subprocess
import sys
from importlib.resources import files

import jsonschema
import numpy as np
import pytest

from hall_edge import single_particle
from hall_edge.cli import (
    _as_complex_list,
    _as_float,
    _as_grid,
    _as_int,
    csv_text,
    json_dumps,
    main,
)
from hall_edge.errors import ConfigError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def load_schema():
    path = files("hall_edge") / "schemas" / "result_record.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def test_json_emitter_round_trips_floats():
    doc = {
        "pi": math.pi,
        "tenth": 0.1,
        "big": 1.2345678901234567e300,
        "neg": -0.0,
        "int": 42,
        "flag": True,
        "text": "hi",
        "none": None,
        "z": complex(1.5, -2.5),
        "inf": math.inf,
        "nan": math.nan,
        "list": [1.0, 2],
    }
    parsed = json.loads(json_dumps(doc))
    assert parsed["pi"] == math.pi
    assert parsed["tenth"] == 0.1
    assert parsed["big"] == 1.2345678901234567e300
    assert parsed["int"] == 42
    assert parsed["flag"] is True
    assert parsed["none"] is None
    assert parsed["z"] == {"re": 1.5, "im": -2.5}
    assert parsed["inf"] == "inf"
    assert parsed["nan"] == "nan"
    assert parsed["list"] == [1.0, 2]


def test_csv_splits_complex_columns():
    records = [
        {"p": 1, "value": complex(0.5, -0.25), "ok": True},
        {"p": 2, "value": complex(1.0, 0.0), "ok": False, "extra": 3.5},
    ]
    text = csv_text(records)
    lines = text.splitlines()
    assert lines[0] == "p,value_re,value_im,ok,extra"
    assert lines[1] == "1,0.5,-0.25,true,"
    assert lines[2] == "2,1,0,false,3.5"


def test_parsers():
    assert _as_int("3") == 3
    assert _as_int(4.0) == 4
    with pytest.raises(ConfigError):
        _as_int("3.2")
    assert _as_float("inf") == math.inf
    assert _as_float("-inf") == -math.inf
    with pytest.raises(ConfigError):
        _as_float("abc")
    zs = _as_complex_list("-0.9-0.6j,0.5-1.1j")
    assert zs == (complex(-0.9, -0.6), complex(0.5, -1.1))
    zs = _as_complex_list([{"re": 1.0, "im": -2.0}, "0.5-1.1j"])
    assert zs == (complex(1.0, -2.0), complex(0.5, -1.1))
    assert _as_grid("-2:2:5") == (-2.0, 2.0, 5)
    with pytest.raises(ConfigError):
        _as_grid("-2:2")
    with pytest.raises(ConfigError):
        _as_grid("0:1:1")


def test_spectrum_output_matches_schema(capsys):
    code, out, _ = run_cli(
        capsys,
        "spectrum",
        "--b-field", "10", "--trap-strength", "0.1",
        "--max-fast", "1", "--max-slow", "2",
    )
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert len(doc["records"]) == 2 * 3
    config = single_particle.effective_field(10.0, 0.1)
    first = doc["records"][0]
    assert first["excitation"] == 0
    assert first["energy"] == single_particle.ground_state_energy(config)
    assert doc["metadata"]["command"] == "spectrum"
    assert doc["metadata"]["omega_fast"] == config.omega_fast


def test_current_algebra_schema_and_value(capsys):
    code, out, _ = run_cli(
        capsys,
        "current-algebra",
        "--quantity", "central", "--half-width", "12", "--momentum", "4",
    )
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    rec = doc["records"][0]
    assert rec["p_prime"] == -4
    assert rec["value"] == {"re": -4, "im": 0}
    assert doc["metadata"]["parameters"]["beta"] == "inf"


def test_exit_code_config_errors(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"bogus": 1, "b_field": 2.0}')
    code, out, err = run_cli(capsys, "spectrum", "--config", str(cfg))
    assert code == 2
    assert out == ""
    record = json.loads(err)["error"]
    assert record["type"] == "ConfigError"
    assert "bogus" in record["message"]
    assert record["exit_code"] == 2

    code, _, err = run_cli(capsys, "dynamics", "--b-field", "3")
    assert code == 2
    assert "trap-strength" in json.loads(err)["error"]["message"]

    code, _, err = run_cli(capsys, "no-such-command")
    assert code == 2

    code, _, err = run_cli(capsys, "spectrum", "--b-field", "1",
                           "--trap-strength", "1", "--format", "yaml")
    assert code == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, "spectrum", "--config", str(bad))
    assert code == 2


def test_exit_code_precondition(capsys):
    code, out, err = run_cli(
        capsys,
        "laughlin", "--nu", "1",
        "--poles", "0.5-1.1j,0.5-1.1j", "--xs", "0.1,0.2",
    )
    assert code == 3
    record = json.loads(err)["error"]
    assert record["type"] == "DegenerateInputError"
    assert record["exit_code"] == 3


def test_exit_code_accuracy(capsys):
    code, _, err = run_cli(
        capsys,
        "laughlin", "--nu", "1",
        "--poles=-0.9-0.6j,0.5-1.1j", "--xs=-1.2,0.8", "--eps", "0.3",
        "--oracle", "--nodes-per-dim", "12",
    )
    assert code == 4
    assert json.loads(err)["error"]["type"] == "AccuracyError"


def test_exit_code_resource_limit(capsys):
    code, _, err = run_cli(
        capsys,
        "correlator", "--charges", "1,-1", "--angles", "0.3,2.0", "--eps", "0.1",
        "--brute-force", "--num-modes", "2000", "--max-occupation", "40",
    )
    assert code == 5
    assert json.loads(err)["error"]["type"] == "ResourceLimitError"


def test_help_exits_zero():
    with pytest.raises(SystemExit) as excinfo:
        main(["--help"])
    assert excinfo.value.code == 0


def test_config_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        '{"b_field": 5.0, "trap_strength": 0.2, "max_fast": 1, "max_slow": 0}'
    )
    code, out, _ = run_cli(
        capsys, "spectrum", "--config", str(cfg), "--max-fast", "0",
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["records"]) == 1
    assert doc["metadata"]["parameters"]["b_field"] == 5.0
    assert doc["metadata"]["parameters"]["max_fast"] == 0


def test_csv_has_no_timing(capsys):
    code, out, _ = run_cli(
        capsys,
        "correlator", "--charges", "1,-1", "--angles", "0.3,2.0", "--eps", "0.1",
        "--format", "csv",
    )
    assert code == 0
    assert "elapsed" not in out
    lines = out.splitlines()
    assert lines[0].startswith("value_re,value_im,")
    assert "true" in lines[1]


def test_output_deterministic_modulo_timing(capsys):
    argv = (
        "laughlin", "--nu", "2",
        "--poles=-0.9-0.6j,0.5-1.1j", "--xs=-1.2,0.8", "--eps", "0.3",
        "--beta", "1.5",
    )
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    strip = lambda s: re.sub(r'"elapsed_seconds": [^\n]+', "", s)
    assert strip(out1) == strip(out2)
    doc = json.loads(out1)
    jsonschema.validate(doc, load_schema())


def test_wavefunction_grid_matches_library(capsys):
    code, out, _ = run_cli(
        capsys,
        "wavefunction", "--b-field", "2", "--trap-strength", "0.1",
        "--fast-index", "0", "--slow-index", "1", "--grid=-1:1:3",
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["records"]) == 9
    config = single_particle.effective_field(2.0, 0.1)
    rec = doc["records"][5]
    psi = single_particle.eval_wavefunction(0, 1, config, rec["x1"], rec["x2"])
    assert rec["psi"]["re"] == psi.real
    assert rec["psi"]["im"] == psi.imag


def test_wavefunction_needs_point_or_grid(capsys):
    code, _, err = run_cli(
        capsys, "wavefunction", "--b-field", "2", "--trap-strength", "0.1",
    )
    assert code == 2
    code, _, err = run_cli(
        capsys, "wavefunction", "--b-field", "2", "--trap-strength", "0.1",
        "--x1", "0.5", "--x2", "0.1", "--grid", "-1:1:3",
    )
    assert code == 2


def test_density_matches_library(capsys):
    code, out, _ = run_cli(
        capsys,
        "density", "--b-field", "2", "--max-slow", "30",
        "--r-max", "1.0", "--num-points", "4", "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,truncated,closed_form,difference"
    config = single_particle.effective_field(2.0, 0.0)
    rs = np.linspace(0.0, 1.0, 4)
    want = single_particle.lll_density(30, config, rs, 0.0)
    got = [float(line.split(",")[1]) for line in lines[1:]]
    assert got == [float(w) for w in np.asarray(want)]


def test_sweep_single_range_order(capsys, monkeypatch):
    monkeypatch.setenv("HALL_EDGE_THREADS", "3")
    code, out, _ = run_cli(
        capsys,
        "sweep", "--range", "momentum=1:4:4", "--format", "csv",
        "current-algebra", "--quantity", "central", "--half-width", "8",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("momentum,")
    swept = [int(line.split(",")[0]) for line in lines[1:]]
    assert swept == [1, 2, 3, 4]
    values = [float(line.split(",")[4]) for line in lines[1:]]
    assert values == [-1.0, -2.0, -3.0, -4.0]


def test_sweep_two_ranges_product_order(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--range", "momentum=1,2", "--range", "beta=0.8,2.0",
        "--format", "csv",
        "current-algebra", "--quantity", "variance-tail",
        "--half-width", "40", "--inner-half-width", "20",
    )
    assert code == 0
    lines = out.splitlines()
    heads = lines[0].split(",")
    assert heads[:2] == ["momentum", "beta"]
    pairs = [tuple(float(tok) for tok in line.split(",")[:2]) for line in lines[1:]]
    assert pairs == [(1.0, 0.8), (1.0, 2.0), (2.0, 0.8), (2.0, 2.0)]


def test_sweep_metadata(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--range", "momentum=1,2",
        "current-algebra", "--quantity", "central", "--half-width", "6",
    )
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["metadata"]["target"] == "current-algebra"
    assert doc["metadata"]["combinations"] == 2
    assert doc["metadata"]["swept"] == ["momentum"]


def test_sweep_validation(capsys):
    base = ("current-algebra", "--quantity", "central", "--half-width", "6")
    code, _, err = run_cli(capsys, "sweep", *base)
    assert code == 2
    code, _, err = run_cli(
        capsys, "sweep", "--range", "momentum=1,2", "--range", "beta=1,2",
        "--range", "half-width=4,6", *base,
    )
    assert code == 2
    code, _, err = run_cli(capsys, "sweep", "--range", "nonsense=1,2", *base)
    assert code == 2
    code, _, err = run_cli(
        capsys, "sweep", "--range", "momentum=1,2", "--range", "momentum=3,4", *base,
    )
    assert code == 2
    code, _, err = run_cli(capsys, "sweep", "--range", "momentum=1,2", "sweep")
    assert code == 2


def test_sweep_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("HALL_EDGE_THREADS", "soon")
    code, _, err = run_cli(
        capsys,
        "sweep", "--range", "momentum=1,2",
        "current-algebra", "--quantity", "central", "--half-width", "6",
    )
    assert code == 2


def test_laughlin_oracle_report(capsys):
    code, out, _ = run_cli(
        capsys,
        "laughlin", "--nu", "1",
        "--poles=-0.9-0.6j,0.5-1.1j", "--xs=-1.2,0.8", "--eps", "0.3",
        "--oracle",
    )
    assert code == 0
    rec = json.loads(out)["records"][0]
    expected = (-2j * math.pi) ** 2
    assert rec["expected_ratio"]["re"] == expected.real
    assert rec["ratio_deviation"] < 1e-9


def test_plot_writes_svg_with_provenance(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    target = tmp_path / "traj.svg"
    code, _, err = run_cli(
        capsys,
        "dynamics", "--b-field", "3", "--trap-strength", "4",
        "--x1", "1", "--x2", "0", "--p1", "0", "--p2", "0.5",
        "--t-final", "10", "--num-samples", "64",
        "--out", str(tmp_path / "traj.json"), "--plot", str(target),
    )
    assert code == 0
    assert err == ""
    text = target.read_text(encoding="utf-8")
    assert text.lstrip().startswith("<?xml")
    last = text.rstrip().splitlines()[-1]
    assert last.startswith("<!-- hall-edge dynamics")
    assert last.endswith("-->")


def test_plot_unsupported_degrades_to_warning(capsys, tmp_path):
    target = tmp_path / "anyon.svg"
    code, out, err = run_cli(
        capsys,
        "anyon", "--nu", "2", "--xs", "0.1,1.3", "--ys", "2.0,3.1",
        "--eps", "0.2", "--plot", str(target),
    )
    assert code == 0
    assert "warning: plot skipped" in err
    assert not target.exists()
    json.loads(out)


def test_out_file_written(capsys, tmp_path):
    target = tmp_path / "res.json"
    code, out, _ = run_cli(
        capsys,
        "anyon", "--nu", "1", "--xs", "0.1,1.3", "--ys", "2.0,3.1",
        "--eps", "0.2", "--determinant", "--out", str(target),
    )
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text(encoding="utf-8"))
    rec = doc["records"][0]
    assert "determinant" in rec
    assert rec["value"]["re"] == pytest.approx(rec["determinant"]["re"], rel=1e-10)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hall_edge", "spectrum",
         "--b-field", "1", "--trap-strength", "1",
         "--max-fast", "0", "--max-slow", "0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["metadata"]["command"] == "spectrum"
