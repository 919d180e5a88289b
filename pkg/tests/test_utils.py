import pytest
import numpy as np

from src.utils import (fit_power_law, from_serializable, load_json, read_table, relative_drift,
                       save_json, to_serializable, write_series, write_table)

def test_json_keeps_non_finite_floats(tmp_path):
    """Test that inf and nan survive a save and load"""
    path = str(tmp_path / "report.json")
    data = {"bound": float("inf"), "ratio": np.float64(0.5), "values": np.array([1.0, np.nan]),
            "passed": np.bool_(True)}
    assert save_json(data, path)
    loaded = load_json(path)
    assert loaded["bound"] == float("inf")
    assert loaded["ratio"] == 0.5
    assert np.isnan(loaded["values"][1])
    assert loaded["passed"] is True

def test_serializable_complex():
    """Test complex values"""
    assert to_serializable(1.0 + 2.0j) == {"re": 1.0, "im": 2.0}
    assert from_serializable({"re": 1.0, "im": "inf"}) == complex(1.0, float("inf"))

def test_load_json_missing(tmp_path):
    """Test a missing file"""
    assert load_json(str(tmp_path / "missing.json")) is None

def test_write_table_column_order(tmp_path):
    """Test fixed columns and nested directories"""
    path = str(tmp_path / "nested" / "suite.csv")
    rows = [{"ratio": 0.25, "suite": "s", "function_id": "f", "lhs": 1.0, "rhs": 4.0}]
    assert write_table(rows, path)
    table = read_table(path)
    assert list(table.columns) == ["suite", "function_id", "lhs", "rhs", "ratio"]
    assert table["ratio"][0] == pytest.approx(0.25)

def test_write_series(tmp_path):
    """Test a two-column plot-data file"""
    path = str(tmp_path / "series.csv")
    assert write_series(np.array([1.0, 2.0]), np.array([3.0, 4.0]), path, "eps", "sup_error")
    assert list(read_table(path).columns) == ["eps", "sup_error"]

def test_fit_power_law():
    """Test an exact power law"""
    x = np.logspace(-2, 0, 10)
    slope, prefactor, r2 = fit_power_law(x, 3.0 * x ** 1.5)
    assert slope == pytest.approx(1.5)
    assert prefactor == pytest.approx(3.0)
    assert r2 == pytest.approx(1.0)
    assert np.isnan(fit_power_law([1.0], [1.0])[0])

def test_relative_drift():
    """Test drift values and the degenerate cases"""
    assert relative_drift(2.0, 2.1) == pytest.approx(0.05)
    assert relative_drift(0.0, 0.0) == 0.0
    assert relative_drift(0.0, 1.0) == float("inf")
