"""Readers for the documented gilbertlab output formats.

Each reader validates the file against the published column layout and
raises SchemaError naming the offending column or field, so a figure is
never drawn from a file the primary tool did not produce. Only the
documented interfaces are consumed here; nothing imports the simulation
package itself.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

__all__ = [
    "SchemaError",
    "SWEEP_COLUMNS",
    "CURVE_COLUMNS",
    "PROFILE_COLUMNS",
    "read_sweep",
    "read_curves",
    "read_profile",
    "read_gap_report",
    "read_critical",
]

SWEEP_COLUMNS = ("model", "lambda", "n", "p", "q", "theta", "se", "reps")
CURVE_COLUMNS = ("n", "lambda", "theta", "se")
PROFILE_COLUMNS = ("p", "q", "n", "intensity", "trials",
                   "pivotal1", "pivotal1_se", "pivotal2", "pivotal2_se", "ratio")


class SchemaError(Exception):
    """An input does not match the documented schema.

    ``column`` carries the offending column or field name when one is
    identifiable.
    """

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


def _read_table(path, columns, numeric):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for name in columns:
            if name not in header:
                raise SchemaError(f"{path}: missing column {name!r}", column=name)
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    table = {}
    for name in columns:
        if name in numeric:
            values = np.empty(len(rows))
            for k, row in enumerate(rows):
                try:
                    values[k] = float(row[name])
                except (TypeError, ValueError):
                    raise SchemaError(
                        f"{path}: column {name!r} has non-numeric value "
                        f"{row[name]!r} on data row {k + 1}", column=name)
            table[name] = values
        else:
            table[name] = np.array([row[name] for row in rows], dtype=object)
    return table


def read_sweep(path) -> dict:
    """Crossing-probability sweep: one row per (model, lambda, n, p)."""
    table = _read_table(path, SWEEP_COLUMNS,
                        numeric=SWEEP_COLUMNS[1:])
    bad = ~np.isfinite(table["theta"])
    if bad.any():
        raise SchemaError(f"{path}: column 'theta' has non-finite values",
                          column="theta")
    return table


def read_curves(path) -> dict:
    """Crossing curves over intensity, one row per (n, lambda)."""
    return _read_table(path, CURVE_COLUMNS, numeric=CURVE_COLUMNS)


def read_profile(path) -> dict:
    """Pivotality-integral profile over site/enhancement levels."""
    return _read_table(path, PROFILE_COLUMNS, numeric=PROFILE_COLUMNS)


def _require_field(doc, name, path, kind=None):
    if name not in doc:
        raise SchemaError(f"{path}: missing field {name!r}", column=name)
    value = doc[name]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}: field {name!r} has unexpected type "
                          f"{type(value).__name__}", column=name)
    return value


def _interval(doc, name, path):
    pair = _require_field(doc, name, path, list)
    if len(pair) != 2 or not all(isinstance(v, (int, float)) for v in pair):
        raise SchemaError(f"{path}: field {name!r} is not a numeric pair",
                          column=name)
    return float(pair[0]), float(pair[1])


def read_gap_report(path) -> dict:
    """Site/bond half-point comparison, one row per window size."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})")
    rows = _require_field(doc, "rows", path, list)
    if not rows:
        raise SchemaError(f"{path}: field 'rows' is empty", column="rows")
    out = []
    for row in rows:
        item = {"n": None}
        for name in ("n", "site_half", "bond_half", "gap"):
            value = _require_field(row, name, path)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise SchemaError(f"{path}: row field {name!r} is not finite",
                                  column=name)
            item[name] = float(value)
        for name in ("site_ci", "bond_ci", "gap_ci"):
            item[name] = _interval(row, name, path)
        item["disjoint"] = bool(_require_field(row, "disjoint", path))
        out.append(item)
    out.sort(key=lambda item: item["n"])
    return {
        "intensity": float(_require_field(doc, "intensity", path, (int, float))),
        "replicates": int(_require_field(doc, "replicates", path, int)),
        "rows": out,
    }


def read_critical(path) -> dict:
    """Consensus critical-intensity report (overlay for the curve plot)."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})")
    return {
        "value": float(_require_field(doc, "value", path, (int, float))),
        "interval": _interval(doc, "interval", path),
    }
