"""Headerless CSV serialization for dense matrices and vectors."""
from __future__ import annotations

import numpy as np


def _format_row(row) -> str:
    return ",".join(repr(float(v)) for v in row)


def save_matrix(path, A) -> None:
    """Write a 2-d array as headerless CSV, one row per line."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    with open(path, "w", encoding="ascii") as fh:
        for row in A:
            fh.write(_format_row(row) + "\n")


def save_vector(path, v) -> None:
    """Write a 1-d array as headerless CSV, one value per line."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a 1-d array")
    with open(path, "w", encoding="ascii") as fh:
        for val in v:
            fh.write(repr(float(val)) + "\n")


def _parse(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no data")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: ragged rows")
    out = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{path}: non-finite entries")
    return out


def load_matrix(path) -> np.ndarray:
    """Read a headerless CSV file as a 2-d float array."""
    return _parse(path)


def load_vector(path) -> np.ndarray:
    """Read a headerless CSV file as a 1-d float array.

    Accepts either a single column (one value per line) or a single row.
    """
    out = _parse(path)
    if out.shape[1] == 1:
        return out[:, 0]
    if out.shape[0] == 1:
        return out[0, :]
    raise ValueError(f"{path}: expected a single row or column")
