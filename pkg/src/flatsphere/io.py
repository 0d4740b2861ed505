"""Versioned JSON documents and CSV exports.

Floats are written with 17 significant digits so files round-trip exactly.
"""
import csv
import json
import math
from pathlib import Path

import numpy as np

from .cutoff import KernelSpec
from .errors import FormatError
from .points import PointSet
from .system import FlatSystem

POINTS_FORMAT = "flatsphere-points/1"
SYSTEM_FORMAT = "flatsphere-system/1"
MATRIX_FORMAT = "flatsphere-matrix/1"
REPORT_FORMAT = "flatsphere-report/1"


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite value {x}")
    return format(x, ".16e")


def _encode(obj, depth=0):
    if isinstance(obj, dict):
        pad = "\n" + "  " * (depth + 1)
        items = [f"{json.dumps(str(k))}: {_encode(v, depth + 1)}" for k, v in obj.items()]
        return "{" + ",".join(pad + it for it in items) + "\n" + "  " * depth + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if obj and isinstance(obj[0], (list, tuple, dict, np.ndarray)):
            pad = "\n" + "  " * (depth + 1)
            inner = ",".join(pad + _encode(v, depth + 1) for v in obj)
            return "[" + inner + "\n" + "  " * depth + "]"
        return "[" + ", ".join(_encode(v, depth + 1) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(obj if not isinstance(obj, np.bool_) else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return _encode(obj) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_document(path, expected):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt != expected:
        raise FormatError(f"{path}: expected format {expected!r}, found {fmt!r}")
    return doc


def _point_array(raw, m):
    arr = np.asarray(raw, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, m + 1)
    if arr.ndim != 2 or arr.shape[1] != m + 1:
        raise FormatError(f"points must be a list of {m + 1}-vectors")
    return arr


def points_document(points, L=None):
    doc = {"format": POINTS_FORMAT, "m": points.m, "degree": points.degree,
           "epsilon": points.epsilon}
    if L is not None:
        doc["L"] = int(L)
    doc["points"] = points.points
    return doc


def save_points(path, points, L=None):
    write_json(path, points_document(points, L))


def load_points(path):
    """Return ``(PointSet, L or None)``."""
    doc = read_document(path, POINTS_FORMAT)
    try:
        m = int(doc["m"])
        pts = _point_array(doc["points"], m)
        eps = doc.get("epsilon")
        ps = PointSet(m, pts, int(doc["degree"]), None if eps is None else float(eps))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{path}: malformed points document ({exc})") from exc
    return ps, doc.get("L")


def system_document(system):
    a = system.coefficients
    return {
        "format": SYSTEM_FORMAT,
        "m": system.m,
        "L": system.L,
        "epsilon": system.epsilon,
        "degree": system.points.degree,
        "points": system.points.points,
        "coefficients": np.stack([a.real, a.imag], axis=-1),
    }


def save_system(path, system):
    write_json(path, system_document(system))


def load_system(path):
    """Rebuild a :class:`FlatSystem` from its JSON form (Gramian not included)."""
    from .cutoff import kernel_norm_sq

    doc = read_document(path, SYSTEM_FORMAT)
    try:
        m, L, eps = int(doc["m"]), int(doc["L"]), float(doc["epsilon"])
        pts = _point_array(doc["points"], m)
        coef = np.asarray(doc["coefficients"], dtype=np.float64)
        n = pts.shape[0]
        if coef.shape != (n, n, 2):
            raise FormatError(f"coefficients must have shape ({n}, {n}, 2), got {coef.shape}")
        spec = KernelSpec(m, L, eps)
        ps = PointSet(m, pts, int(doc.get("degree", L)), eps)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{path}: malformed system document ({exc})") from exc
    return FlatSystem(ps, spec, coef[..., 0] + 1j * coef[..., 1], kernel_norm_sq(spec))


def save_matrix(path, matrix, name="matrix"):
    """Dense row-major export; ``.csv`` suffix selects CSV, anything else JSON."""
    matrix = np.asarray(matrix, dtype=np.float64)
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            for row in matrix:
                w.writerow([format(v, ".17g") for v in row])
    else:
        write_json(path, {"format": MATRIX_FORMAT, "name": name, "shape": list(matrix.shape),
                          "entries": matrix})


def load_matrix(path):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return np.loadtxt(path, delimiter=",", ndmin=2)
    doc = read_document(path, MATRIX_FORMAT)
    return np.asarray(doc["entries"], dtype=np.float64).reshape(doc["shape"])


EVAL_HEADER = ["x", "y", "z", "i", "re", "im", "abs"]


def write_eval_csv(fh, points, rows, values):
    """Rows ``(x, y, z, i, re, im, abs)``; ``values`` is (len(rows), len(points))."""
    w = csv.writer(fh)
    dim = points.shape[1]
    coords = EVAL_HEADER[:3] if dim == 3 else [f"x{c}" for c in range(dim)]
    w.writerow(coords + EVAL_HEADER[3:])
    for r, i in enumerate(rows):
        for q in range(points.shape[0]):
            v = values[r, q]
            w.writerow([format(c, ".17g") for c in points[q]]
                       + [int(i), format(v.real, ".17g"), format(v.imag, ".17g"),
                          format(abs(v), ".17g")])
