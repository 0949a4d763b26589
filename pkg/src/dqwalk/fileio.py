"""Deterministic CSV and JSON-sidecar writers.

Floats are rendered with Python's shortest round-trip representation, so a
rerun with identical inputs produces byte-identical files.  Sidecars carry
the fully resolved configuration (no timestamps) for the same reason.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def sidecar_path(out_path) -> Path:
    """JSON metadata path for a CSV output (d.csv -> d.json)."""
    out = Path(out_path)
    side = out.with_suffix(".json") if out.suffix else Path(str(out) + ".json")
    if side == out:
        side = Path(str(out) + ".meta.json")
    return side


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def write_sidecar(out_path, payload: dict) -> Path:
    side = sidecar_path(out_path)
    with side.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return side
