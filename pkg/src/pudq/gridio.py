"""Shared CSV/JSON table format.

Exact rationals are written as ``"a/b"`` strings; complex samples become a
``re``/``im`` column pair.  Writes are atomic (temp file + rename) so a failed
command never leaves partial output behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np

from .scalars import Scalar, QuadExt, format_coeff

__all__ = ["Table", "render", "atomic_write", "cell", "float_repr"]


def float_repr(x: float) -> str:
    """Shortest round-tripping decimal (deterministic across runs)."""
    return repr(float(x))


def cell(v):
    """JSON/CSV-safe rendering of one value."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if type(v).__name__ == "mpq":
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (Scalar, QuadExt)):
        return format_coeff(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return str(v)


class Table:
    """Column-named rows; complex columns are split into ``<name>_re``/``<name>_im``."""

    def __init__(self, columns, rows, meta: dict | None = None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.meta = dict(meta or {})

    @classmethod
    def from_grid(cls, names, coords, values, meta=None) -> "Table":
        """``coords`` is a list of flattened coordinate arrays, ``values`` complex."""
        values = np.asarray(values).ravel()
        cols = list(names) + ["value_re", "value_im"]
        rows = [[float(c[i]) for c in coords] + [float(values[i].real), float(values[i].imag)] for i in range(values.size)]
        return cls(cols, rows, meta)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([float_repr(v) if isinstance(v, float) else cell(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": self.meta,
            "columns": self.columns,
            "rows": [[cell(v) for v in r] for r in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        return render(self, fmt)


def render(obj, fmt: str) -> str:
    if isinstance(obj, Table):
        if fmt == "csv":
            return obj.to_csv()
        if fmt == "json":
            return obj.to_json()
        raise ValueError(f"unknown format {fmt!r}")
    return json.dumps(obj, indent=2, sort_keys=True, default=cell) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".pudq-", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
