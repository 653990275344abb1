"""Deterministic table and record serialization.

Every artifact the command line layer emits goes through these helpers so
that identical inputs produce byte-identical files: UTF-8, newline
terminated rows separated by a bare line feed, floats printed with 17
significant digits (enough to round-trip IEEE doubles), and JSON with
sorted keys.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError

FLOAT_FMT = "%.17g"


def format_value(x) -> str:
    """Render one cell: floats via %.17g, ints plainly, strings as-is."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool) or isinstance(x, (np.bool_,)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return FLOAT_FMT % float(x)


def table_bytes(columns, rows) -> bytes:
    lines = [",".join(columns)]
    width = len(columns)
    for row in rows:
        if len(row) != width:
            raise DomainError("row width does not match the header")
        lines.append(",".join(format_value(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_table(path, columns, rows, fmt: str = "csv") -> Path:
    """Write a columns/rows table as CSV or as an equivalent JSON object."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path.write_bytes(table_bytes(columns, rows))
    elif fmt == "json":
        payload = {
            "columns": list(columns),
            "rows": [[_jsonable(v) for v in row] for row in rows],
        }
        path.write_bytes(
            (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8"))
    else:
        raise DomainError(f"unknown table format {fmt!r}")
    return path


def _jsonable(v):
    if isinstance(v, str):
        return v
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if math.isnan(v):
        return None
    return v


def write_record(path, record: dict, fmt: str = "json") -> Path:
    """Write a flat mapping as sorted JSON, or as a one-row CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = {k: _jsonable(v) for k, v in record.items()}
        path.write_bytes(
            (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8"))
    elif fmt == "csv":
        keys = sorted(record.keys())
        path.write_bytes(table_bytes(keys, [[record[k] for k in keys]]))
    else:
        raise DomainError(f"unknown record format {fmt!r}")
    return path


def read_record(path) -> dict:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DomainError(f"{path} does not hold a JSON object")
    return data


def read_table(path) -> tuple:
    """Read back a CSV written by write_table; returns (columns, float rows).

    Non-numeric cells are kept as strings, so mixed tables (like the
    Nyquist segment column) survive a round trip.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise DomainError(f"{path} is empty")
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = []
        for cell in ln.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(cells)
    return columns, rows


def column(table: tuple, name: str) -> np.ndarray:
    """Extract one numeric column from a read_table result."""
    columns, rows = table
    if name not in columns:
        raise DomainError(f"table has no column {name!r}")
    j = columns.index(name)
    return np.array([row[j] for row in rows], dtype=np.float64)
