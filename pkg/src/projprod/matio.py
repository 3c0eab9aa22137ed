"""Matrix file format: JSON objects with explicit real/imaginary parts.

A matrix file holds one object {"rows": m, "cols": n, "re": [[...]], "im":
[[...]]} with row-major arrays of finite numbers; "im" may be omitted for
real matrices.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import MatrixInputError

__all__ = ["matrix_from_obj", "matrix_to_obj", "load_matrix", "dump_matrix"]


def _check_part(part, rows, cols, key):
    if not isinstance(part, list) or len(part) != rows:
        raise MatrixInputError(f'"{key}" must be a list of {rows} rows')
    for i, row in enumerate(part):
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixInputError(f'"{key}" row {i} is ragged: expected {cols} entries')
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise MatrixInputError(f'"{key}"[{i}][{j}] is not a number')
            if not math.isfinite(x):
                raise MatrixInputError(f'"{key}"[{i}][{j}] is not finite')


def matrix_from_obj(obj):
    """Build a complex matrix from the parsed JSON object."""
    if not isinstance(obj, dict):
        raise MatrixInputError("matrix file must hold a JSON object")
    for key in ("rows", "cols", "re"):
        if key not in obj:
            raise MatrixInputError(f'missing required key "{key}"')
    rows, cols = obj["rows"], obj["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 0:
        raise MatrixInputError('"rows" must be a positive int and "cols" a non-negative int')
    _check_part(obj["re"], rows, cols, "re")
    m = np.array(obj["re"], dtype=float).reshape(rows, cols).astype(complex)
    if "im" in obj and obj["im"] is not None:
        _check_part(obj["im"], rows, cols, "im")
        m = m + 1j * np.array(obj["im"], dtype=float).reshape(rows, cols)
    return m


def matrix_to_obj(m):
    """JSON-ready dict for a matrix; "im" is included only when nonzero."""
    m = np.asarray(m, dtype=complex)
    obj = {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [[float(x) for x in row] for row in m.real],
    }
    if np.any(m.imag != 0.0):
        obj["im"] = [[float(x) for x in row] for row in m.imag]
    return obj


def load_matrix(path):
    """Parse a matrix file; errors carry the offending line where known."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise MatrixInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixInputError(f"malformed JSON in {path} at line {exc.lineno}: {exc.msg}") from exc
    return matrix_from_obj(obj)


def dump_matrix(m, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_obj(m), fh)
        fh.write("\n")
