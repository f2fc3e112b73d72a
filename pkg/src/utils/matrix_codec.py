"""JSON encoding of complex matrices and diff-stable number formatting.

Complex numbers are always ``[re, im]`` pairs; matrices are row-major lists of
rows. Decoders take the JSON path of the value so schema errors can point at it.
"""

import math
from typing import Any

import numpy as np

from .errors import InstanceValidationError

FORMAT_TAG = "tradeoff-lab/1"

# Significant digits used in CSV and text output.
SIGNIFICANT_DIGITS = 12


def encode_complex(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def encode_vector(vec: np.ndarray) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(vec).ravel()]


def encode_matrix(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[encode_complex(z) for z in row] for row in np.asarray(matrix)]


def _decode_number(value: Any, path: str) -> complex:
    if isinstance(value, bool):
        raise InstanceValidationError(path, "expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(float(value[0]), float(value[1]))
    raise InstanceValidationError(path, "expected a number or [re, im] pair")


def decode_vector(data: Any, path: str) -> np.ndarray:
    """Decode a list of numbers / [re, im] pairs into a complex vector."""
    if not isinstance(data, list) or not data:
        raise InstanceValidationError(path, "expected a non-empty list")
    return np.array([_decode_number(v, f"{path}[{i}]") for i, v in enumerate(data)], dtype=complex)


def decode_matrix(data: Any, path: str) -> np.ndarray:
    """Decode a row-major list of rows into a complex matrix."""
    if not isinstance(data, list) or not data:
        raise InstanceValidationError(path, "expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(data):
        if not isinstance(row, list) or not row:
            raise InstanceValidationError(f"{path}[{i}]", "expected a non-empty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InstanceValidationError(
                f"{path}[{i}]", f"row has {len(row)} entries, expected {width}"
            )
        rows.append([_decode_number(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=complex)


def is_matrix_data(data: Any) -> bool:
    """True when ``data`` looks like a matrix (list of rows) rather than a vector."""
    return (
        isinstance(data, list)
        and bool(data)
        and isinstance(data[0], list)
        and bool(data[0])
        and isinstance(data[0][0], list)
    )


def format_float(value: float | None) -> str:
    """Format with 12 significant digits, '.' decimal, no locale."""
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def json_float(value: float | None) -> float | str | None:
    """JSON-safe float: infinities become strings, everything else passes through."""
    if value is None:
        return None
    value = float(value)
    if math.isinf(value) or math.isnan(value):
        return format_float(value)
    return value
