# src/utils.py

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression
from typing import Dict, List, Optional, Sequence, Tuple
from pathlib import Path
import json
import logging

TABLE_COLUMNS = ["suite", "function_id", "lhs", "rhs", "ratio"]
FLOAT_FORMAT = "%.12e"

def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Configure logging for the harness"""
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.insert(0, logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s [%(levelname)s] %(message)s',
        handlers=handlers,
        force=True
    )

def to_serializable(value):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'"""
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_serializable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_serializable(float(value.real)), "im": to_serializable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value):
            return "nan"
        if np.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value

def from_serializable(value):
    """Inverse of to_serializable for floats"""
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            return complex(from_serializable(value["re"]), from_serializable(value["im"]))
        return {k: from_serializable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_serializable(v) for v in value]
    if value in ("inf", "-inf", "nan"):
        return float(value)
    return value

def save_json(data: Dict, filename: str) -> bool:
    """Save a dict as JSON with sorted keys"""
    try:
        Path(filename).parent.mkdir(parents=True, exist_ok=True)
        with open(filename, 'w') as f:
            json.dump(to_serializable(data), f, indent=2, sort_keys=True)
            f.write("\n")
        return True
    except Exception as e:
        logging.error(f"JSON save failed for {filename}: {str(e)}")
        return False

def load_json(filename: str) -> Optional[Dict]:
    """Load a JSON file written by save_json"""
    try:
        with open(filename, 'r') as f:
            return from_serializable(json.load(f))
    except Exception as e:
        logging.error(f"JSON load failed for {filename}: {str(e)}")
        return None

def write_table(rows: Sequence[Dict], filename: str,
                columns: Sequence[str] = TABLE_COLUMNS) -> bool:
    """Write rows as CSV with a fixed column order"""
    try:
        Path(filename).parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(list(rows), columns=list(columns))
        frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT)
        return True
    except Exception as e:
        logging.error(f"Table write failed for {filename}: {str(e)}")
        return False

def read_table(filename: str) -> Optional[pd.DataFrame]:
    try:
        return pd.read_csv(filename)
    except Exception as e:
        logging.error(f"Table read failed for {filename}: {str(e)}")
        return None

def write_series(x: np.ndarray, y: np.ndarray, filename: str, x_name: str = "xi",
                 y_name: str = "value") -> bool:
    """Plot-data series as a two-column CSV"""
    rows = [{x_name: float(a), y_name: float(b)} for a, b in zip(np.asarray(x), np.asarray(y))]
    return write_table(rows, filename, [x_name, y_name])

def fit_power_law(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """
    Fit y = C x^s by least squares in log-log coordinates

    Returns:
        (s, C, R^2); nonpositive samples are dropped, fewer than two give nan
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if np.count_nonzero(keep) < 2:
        return float("nan"), float("nan"), float("nan")
    X = np.log(x[keep]).reshape(-1, 1)
    Y = np.log(y[keep])
    model = LinearRegression().fit(X, Y)
    r2 = float(model.score(X, Y)) if np.ptp(Y) > 0 else 1.0
    return float(model.coef_[0]), float(np.exp(model.intercept_)), r2

def relative_drift(reference: float, value: float) -> float:
    """|value - reference| / |reference|, 0 when both vanish"""
    if reference == value:
        return 0.0
    if reference == 0 or not np.isfinite(reference) or not np.isfinite(value):
        return float("inf")
    return abs(value - reference) / abs(reference)
