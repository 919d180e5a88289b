import json

import pytest

from src.cli import EXIT_CONFIG, EXIT_OK, build_parser, main
from src.utils import load_json, read_table

RUN_CONFIG = """
seed = 11

[datum]
multiplicities = [1.0, 0.0]

[grid]
x_max = 8.0
lambda_max = 16.0
panel_order = 16

[[suites]]
id = "closed"
check = "closed_forms"

[[suites]]
id = "c"
check = "c_function"
"""

@pytest.fixture
def write_config(tmp_path):
    def write(text, name="suite.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write

def test_list_suites(capsys):
    """Test that every check is listed"""
    assert main(["list-suites"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "hausdorff_young_shifted" in out
    assert "oneil" in out

def test_parser_accepts_config_flag():
    """Test the --config spelling"""
    args = build_parser().parse_args(["run", "--config", "a.toml", "--refine", "2"])
    assert args.config_flag == "a.toml"
    assert args.refine == 2

def test_missing_config_is_config_error(capsys):
    """Test exit code 2 without a configuration"""
    assert main(["run"]) == EXIT_CONFIG
    assert "configuration file is required" in capsys.readouterr().err

def test_invalid_config_exit_code(write_config, tmp_path, capsys):
    """Test exit code 2 and the line in the message"""
    path = write_config('[[suites]]\nid = "s"\ncheck = "hausdorff_young_shifted"\np = 1.5\neta = 0.4\n')
    assert main(["run", path, "--out", str(tmp_path / "out")]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "eps_p" in err
    assert ":5)" in err

def test_empty_suite_list(write_config, tmp_path):
    """Test that no suites still writes an empty passing summary"""
    out = tmp_path / "empty"
    assert main(["run", write_config("seed = 3\n"), "--out", str(out)]) == EXIT_OK
    summary = load_json(str(out / "summary.json"))
    assert summary["suites"] == []
    assert summary["passed"] is True
    assert summary["seed"] == 3

def test_run_writes_outputs(write_config, tmp_path):
    """Test per-suite files, the ordered summary and timings"""
    out = tmp_path / "results"
    assert main(["run", write_config(RUN_CONFIG), "--out", str(out), "--log-level", "WARNING"]) == EXIT_OK
    summary = load_json(str(out / "summary.json"))
    assert [entry["id"] for entry in summary["suites"]] == ["closed", "c"]
    assert summary["seed"] == 11
    report = load_json(str(out / "closed.json"))
    assert report["passed"] is True
    assert "timings" not in report
    table = read_table(str(out / "closed.csv"))
    assert list(table.columns) == ["suite", "function_id", "lhs", "rhs", "ratio"]
    timings = json.loads((out / "timings.json").read_text())
    assert set(timings) == {"closed", "c"}
    assert (out / "harness.log").exists()

def test_run_single_suite_and_seed_override(write_config, tmp_path):
    """Test --suite and --seed"""
    out = tmp_path / "single"
    assert main(["run", write_config(RUN_CONFIG), "--out", str(out), "--suite", "c", "--seed", "5"]) == EXIT_OK
    summary = load_json(str(out / "summary.json"))
    assert [entry["id"] for entry in summary["suites"]] == ["c"]
    assert summary["seed"] == 5

def test_run_unknown_suite(write_config, tmp_path):
    """Test --suite with an id the config does not have"""
    out = tmp_path / "unknown"
    assert main(["run", write_config(RUN_CONFIG), "--out", str(out), "--suite", "nope"]) == EXIT_CONFIG

def test_limits_command(write_config, tmp_path):
    """Test the contraction study output"""
    out = tmp_path / "limits"
    assert main(["limits", write_config(RUN_CONFIG), "--out", str(out)]) == EXIT_OK
    study = load_json(str(out / "limits.json"))
    assert study["eps"] == [0.2, 0.1, 0.05, 0.02]
    assert study["monotone"] is True
    assert (out / "plots" / "contraction.csv").exists()
