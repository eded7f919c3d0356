"""
Output formatting helpers.

All floats leave the package with 12 significant digits; infinities are
written as the strings "inf"/"-inf" so JSON stays standard.
"""

import math
from dataclasses import asdict, is_dataclass
from typing import Any

import numpy as np

from ..constants import FLOAT_DIGITS


def format_float(value: float) -> str:
    """Format a float with 12 significant digits."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.{FLOAT_DIGITS}g}"


def round_float(value: float) -> float | str:
    """Round a float to 12 significant digits for JSON output."""
    if math.isinf(value) or math.isnan(value):
        return format_float(value)
    return float(format_float(value))


def to_jsonable(data: Any) -> Any:
    """
    Convert numpy types, dataclasses and tuples into plain JSON values.

    Objects exposing ``to_dict`` are converted through it.
    """
    if hasattr(data, "to_dict"):
        return to_jsonable(data.to_dict())
    if is_dataclass(data) and not isinstance(data, type):
        return to_jsonable(asdict(data))
    if isinstance(data, dict):
        return {str(k): to_jsonable(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(v) for v in data]
    if isinstance(data, np.ndarray):
        return to_jsonable(data.tolist())
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        return round_float(float(data))
    return data
