"""
Deterministic text formatting for numbers and matrices.

Floats are printed with 12 significant digits and matrix entries are rounded
at 1e-12 so that CLI output is stable across platforms. Deviations and other
plain floats keep their full value in JSON.
"""

import math
from typing import Any, Dict, List

import numpy as np

SIGNIFICANT_DIGITS = 12
ROUNDING = 1e-12


def format_float(value: float) -> str:
    """Format a float with 12 significant digits, normalising negative zero."""
    if abs(value) < ROUNDING:
        value = 0.0
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_complex(value: complex) -> str:
    """Format a complex number as ``a+bi`` with rounded parts."""
    real = format_float(value.real)
    imag = value.imag if abs(value.imag) >= ROUNDING else 0.0
    if imag == 0.0:
        return real
    sign = "-" if imag < 0 else "+"
    return f"{real}{sign}{format_float(abs(imag))}i"


def matrix_rows(matrix: np.ndarray) -> List[List[str]]:
    """Render a complex matrix as rows of formatted entries."""
    return [[format_complex(complex(entry)) for entry in row] for row in matrix]


def complex_to_json(value: complex) -> Dict[str, float]:
    """Rounded JSON form of a complex number."""
    return {
        "re": float(format_float(value.real)),
        "im": float(format_float(value.imag)),
    }


def matrix_to_json(matrix: np.ndarray) -> List[List[Dict[str, float]]]:
    """Rounded JSON form of a complex matrix."""
    return [[complex_to_json(complex(entry)) for entry in row] for row in matrix]


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, tuples and floats into plain JSON values; nan and inf become None."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None
        return float(value)
    if isinstance(value, complex):
        return complex_to_json(value)
    return value
