"""CSV/JSON output with 17 significant digits and atomic file replacement."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .feasibility import RegionGrid


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    cols = [np.asarray(c) for c in columns]
    return atomic_write_text(path, csv_text(header, zip(*cols)))


def read_csv(path) -> dict[str, np.ndarray]:
    """Numeric columns as float arrays; non-numeric columns as object arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = np.array(col, dtype=object)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan literals
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(fmt(x))
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    return obj


def json_text(obj) -> str:
    # floats go through repr, which is the shortest string that round-trips exactly
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def write_json(path, obj) -> Path:
    return atomic_write_text(path, json_text(obj))


# --- region grids -------------------------------------------------------------

def region_rows(grid: RegionGrid) -> tuple[list[str], list[np.ndarray]]:
    names = [ax.name for ax in grid.axes]
    mesh = np.meshgrid(*[ax.values for ax in grid.axes], indexing="ij")
    keys = sorted(grid.margins)
    header = names + [f"margin_{k}" for k in keys] + ["feasible", "boundary"]
    cols = [m.ravel() for m in mesh]
    cols += [grid.margins[k].ravel() for k in keys]
    cols += [grid.feasible.ravel().astype(int), grid.boundary_cells.ravel().astype(int)]
    return header, cols


def write_region(grid: RegionGrid, out_dir, fmt_: str = "csv") -> list[Path]:
    out_dir = Path(out_dir)
    header, cols = region_rows(grid)
    btext = csv_text(
        ["condition", "x", "y"],
        ([name, p[0], p[1]] for name, pts in grid.boundaries.items() for p in pts),
    )
    if fmt_ == "json":
        doc = {
            "axes": [{"name": ax.name, "scale": ax.scale, "values": ax.values} for ax in grid.axes],
            "cells": {h: c for h, c in zip(header, cols)},
            "boundaries": {k: v for k, v in grid.boundaries.items()},
            "meta": grid.meta,
        }
        return [write_json(out_dir / "region.json", doc)]
    return [
        write_csv(out_dir / "region.csv", header, cols),
        atomic_write_text(out_dir / "boundaries.csv", btext),
    ]


def read_boundaries(path) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))[1:]
    out: dict[str, list] = {}
    for name, x, y in rows:
        out.setdefault(name, []).append((float(x), float(y)))
    return {k: np.array(v) for k, v in out.items()}
