"""CSV and JSON serialisation.

Every CSV starts with two comment lines: a magic/version line and the grid
(or axis) description.  Floats are written with ``repr`` so reading a file
back gives bit-identical arrays.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .algebra import LorentzNum
from .clifford import Mat2A
from .flat import CurvePair, Mat2AField
from .grid import GridField, GridSpec
from .weierstrass import Immersion22

__all__ = [
    "SCHEMA_VERSION",
    "CSVFormatError",
    "write_immersion",
    "read_immersion",
    "write_frames",
    "read_frames",
    "write_curves",
    "read_curve",
    "write_gridfield",
    "read_gridfield",
    "write_json",
    "write_obj",
]

SCHEMA_VERSION = 1
_MAGIC = "# lorentz-weierstrass"


class CSVFormatError(ValueError):
    pass


def _grid_line(spec: GridSpec) -> str:
    return (
        f"# grid s0={spec.s0!r} s1={spec.s1!r} t0={spec.t0!r} t1={spec.t1!r} "
        f"Ns={spec.Ns} Nt={spec.Nt}"
    )


def _parse_grid(line: str) -> GridSpec:
    parts = line.strip().split()
    if parts[:2] != ["#", "grid"]:
        raise CSVFormatError("missing '# grid' line")
    kv = {}
    for p in parts[2:]:
        k, _, v = p.partition("=")
        kv[k] = v
    try:
        return GridSpec(
            float(kv["s0"]), float(kv["s1"]), float(kv["t0"]), float(kv["t1"]), int(kv["Ns"]), int(kv["Nt"])
        )
    except (KeyError, ValueError) as exc:
        raise CSVFormatError(f"bad grid line: {exc}") from None


def _fmt(x) -> str:
    return repr(float(x))


def _write(path, kind: str, meta_line: str, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"{_MAGIC} {kind} v{SCHEMA_VERSION}\n")
        fh.write(meta_line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
    return path


def _read(path, kind: str, header: list[str]):
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise CSVFormatError(f"cannot read {path}: {exc}") from None
    if len(lines) < 3:
        raise CSVFormatError(f"{path} is truncated")
    expected = f"{_MAGIC} {kind} v{SCHEMA_VERSION}"
    if lines[0].strip() != expected:
        raise CSVFormatError(f"{path}: expected header {expected!r}, found {lines[0].strip()!r}")
    meta = lines[1]
    rows = list(csv.reader(lines[2:]))
    if rows[0] != header:
        raise CSVFormatError(f"{path}: columns {rows[0]} differ from {header}")
    data = []
    for n, r in enumerate(rows[1:], start=4):
        if not r:
            continue
        if len(r) != len(header):
            raise CSVFormatError(f"{path}:{n}: expected {len(header)} fields, got {len(r)}")
        try:
            vals = [float(x) for x in r]
        except ValueError:
            raise CSVFormatError(f"{path}:{n}: non-numeric field") from None
        if not all(math.isfinite(x) for x in vals):
            raise CSVFormatError(f"{path}:{n}: non-finite value")
        data.append(vals)
    return meta, np.array(data, dtype=float).reshape(-1, len(header))


def _grid_rows(spec: GridSpec, columns):
    S, T = spec.mesh()
    cols = [S.ravel(), T.ravel()] + [np.asarray(c).ravel() for c in columns]
    return zip(*cols)


def _check_grid(spec: GridSpec, data: np.ndarray, path) -> None:
    n = spec.Ns * spec.Nt
    if data.shape[0] != n:
        raise CSVFormatError(f"{path}: expected {n} rows for the grid, got {data.shape[0]}")
    S, T = spec.mesh()
    if np.max(np.abs(data[:, 0] - S.ravel())) > 1e-12 or np.max(np.abs(data[:, 1] - T.ravel())) > 1e-12:
        raise CSVFormatError(f"{path}: (s, t) columns do not match the grid line")


# -- immersions ----------------------------------------------------------------

_IMM_COLS = ["s", "t", "u", "v", "F0", "F1", "F2", "F3"]


def write_immersion(path, F: Immersion22) -> Path:
    u, v = F.spec.uv()
    cols = [u, v] + [F.points[..., k] for k in range(4)]
    meta = _grid_line(F.spec) + " basepoint=" + ",".join(_fmt(x) for x in F.basepoint)
    return _write(path, "immersion", meta, _IMM_COLS, _grid_rows(F.spec, cols))


def read_immersion(path) -> Immersion22:
    meta, data = _read(path, "immersion", _IMM_COLS)
    grid_part, _, base_part = meta.partition(" basepoint=")
    spec = _parse_grid(grid_part)
    _check_grid(spec, data, path)
    try:
        base = np.array([float(x) for x in base_part.split(",")]) if base_part else None
    except ValueError:
        raise CSVFormatError(f"{path}: bad basepoint") from None
    pts = data[:, 4:8].reshape(spec.shape + (4,))
    if base is None or base.shape != (4,):
        base = pts[0, 0].copy()
    return Immersion22(spec, pts, base)


# -- frames and curves -----------------------------------------------------------

_FRAME_COLS = ["s", "t", "a_u", "a_v", "b_u", "b_v", "c_u", "c_v", "d_u", "d_v"]


def write_frames(path, B: Mat2AField) -> Path:
    cols = []
    shape = B.spec.shape
    for x in B.frames.entries():
        cols += [np.broadcast_to(x.u, shape), np.broadcast_to(x.v, shape)]
    return _write(path, "frames", _grid_line(B.spec), _FRAME_COLS, _grid_rows(B.spec, cols))


def read_frames(path) -> Mat2AField:
    meta, data = _read(path, "frames", _FRAME_COLS)
    spec = _parse_grid(meta)
    _check_grid(spec, data, path)
    e = [LorentzNum(data[:, 2 + 2 * k].reshape(spec.shape), data[:, 3 + 2 * k].reshape(spec.shape)) for k in range(4)]
    return Mat2AField(spec, Mat2A(*e))


_CURVE_COLS = ["x", "m11", "m12", "m21", "m22"]


def write_curves(directory, pair: CurvePair) -> tuple[Path, Path]:
    directory = Path(directory)
    out = []
    for name, x, M in (("B1", pair.s, pair.B1), ("B2", pair.t, pair.B2)):
        rows = zip(x, M[:, 0, 0], M[:, 0, 1], M[:, 1, 0], M[:, 1, 1])
        meta = f"# curve {name} over {'s' if name == 'B1' else 't'} N={len(x)}"
        out.append(_write(directory / f"curve_{name}.csv", "curve", meta, _CURVE_COLS, rows))
    return tuple(out)


def read_curve(path) -> tuple[np.ndarray, np.ndarray]:
    _, data = _read(path, "curve", _CURVE_COLS)
    return data[:, 0], data[:, 1:].reshape(-1, 2, 2)


# -- Lorentz-valued fields -----------------------------------------------------------

_FIELD_COLS = ["s", "t", "re", "im"]


def write_gridfield(path, f: GridField) -> Path:
    return _write(path, "field", _grid_line(f.spec), _FIELD_COLS, _grid_rows(f.spec, [f.values.u, f.values.v]))


def read_gridfield(path) -> GridField:
    meta, data = _read(path, "field", _FIELD_COLS)
    spec = _parse_grid(meta)
    _check_grid(spec, data, path)
    return GridField(spec, LorentzNum(data[:, 2].reshape(spec.shape), data[:, 3].reshape(spec.shape)))


# -- JSON and meshes -----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"schema_version": SCHEMA_VERSION, **_jsonable(payload)}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    return path


def write_obj(path, F: Immersion22, coords=(1, 2, 3)) -> Path:
    """Triangulated grid mesh of a 3-coordinate projection (Wavefront OBJ)."""
    if len(coords) != 3 or not all(c in range(4) for c in coords):
        raise ValueError("coords must be three indices in 0..3")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Ns, Nt = F.spec.shape
    P = F.points[..., list(coords)].reshape(-1, 3)
    lines = [f"# projection onto F{coords[0]}, F{coords[1]}, F{coords[2]}"]
    lines += [f"v {x!r} {y!r} {z!r}" for x, y, z in P.tolist()]
    for i in range(Ns - 1):
        for j in range(Nt - 1):
            a = i * Nt + j + 1
            b, c, d = a + Nt, a + Nt + 1, a + 1
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    path.write_text("\n".join(lines) + "\n")
    return path
