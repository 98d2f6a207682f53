"""Field writers: 1-D CSV, self-describing 2-D binary container, Schlieren field."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import model
from .config import format_value
from .grid import Grid
from .model import ModelClosure

CSV_COLUMNS = ("x", "h", "u", "eta", "w", "p", "E")
GRID2D_MAGIC = "HYPERDISP-GRID2D 1"
GRID2D_FIELDS = ("h", "u", "v", "eta", "w", "p", "schlieren")


def schlieren_field(grid: Grid) -> np.ndarray:
    """``ln(1 + 2 |grad h|)`` with central differences (one-sided at the edges)."""
    h = grid.interior[model.RHO]
    if grid.ndim == 2:
        if min(h.shape) < 2:
            raise ValueError("need at least two cells per direction")
        hy, hx = np.gradient(h, grid.dy, grid.dx)
        mag = np.hypot(hx, hy)
    else:
        if h.shape[1] < 2:
            raise ValueError("need at least two cells")
        mag = np.abs(np.gradient(h[0], grid.dx))[None, :]
    return np.log1p(2.0 * mag)


def _diagnostics(grid: Grid, closure: ModelClosure):
    P = grid.primitive()
    p = model.pressure(closure, P.rho, P.eta)
    E = model.total_energy(closure, P)
    return P, p, E


def write_csv_1d(grid: Grid, closure: ModelClosure, path) -> Path:
    """Columns x,h,u,eta,w,p,E with six significant digits; one row per cell."""
    if grid.ndim != 1:
        raise ValueError("CSV output is for 1-D grids")
    P, p, E = _diagnostics(grid, closure)
    table = np.column_stack([grid.x, P.rho[0], P.u[0], P.eta[0], P.w[0], p[0], E[0]])
    path = Path(path)
    np.savetxt(path, table, fmt="%.5e", delimiter=",", header=",".join(CSV_COLUMNS), comments="")
    return path


def read_csv_1d(path) -> dict[str, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, k] for k, name in enumerate(CSV_COLUMNS)}


def write_grid_2d(grid: Grid, closure: ModelClosure, path) -> Path:
    """ASCII header terminated by ``end_header`` then little-endian float64
    arrays, one per field, each (ny, nx) in row-major order."""
    if grid.ndim != 2:
        raise ValueError("2-D container needs a plane grid")
    P, p, _ = _diagnostics(grid, closure)
    arrays = [P.rho, P.u, P.v, P.eta, P.w, p, schlieren_field(grid)]
    header = (
        f"{GRID2D_MAGIC}\n"
        f"dims = {grid.nx} {grid.ny}\n"
        f"spacing = {format_value(grid.dx)} {format_value(grid.dy)}\n"
        f"origin = {format_value(grid.x0)} {format_value(grid.y0)}\n"
        f"fields = {' '.join(GRID2D_FIELDS)}\n"
        "dtype = <f8\n"
        "layout = field-major, row-major (y, x)\n"
        "end_header\n"
    )
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        for a in arrays:
            fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())
    return path


def read_grid_2d(path) -> tuple[dict, dict[str, np.ndarray]]:
    raw = Path(path).read_bytes()
    marker = b"end_header\n"
    cut = raw.index(marker) + len(marker)
    lines = raw[:cut].decode("ascii").splitlines()
    if lines[0] != GRID2D_MAGIC:
        raise ValueError(f"{path}: not a grid container")
    meta = {}
    for line in lines[1:-1]:
        key, value = (s.strip() for s in line.split("=", 1))
        meta[key] = value
    nx, ny = (int(v) for v in meta["dims"].split())
    names = meta["fields"].split()
    payload = np.frombuffer(raw[cut:], dtype="<f8")
    if payload.size != len(names) * nx * ny:
        raise ValueError(f"{path}: payload size does not match header")
    fields = {n: payload[k * nx * ny:(k + 1) * nx * ny].reshape(ny, nx) for k, n in enumerate(names)}
    meta["dx"], meta["dy"] = (float(v) for v in meta["spacing"].split())
    meta["x0"], meta["y0"] = (float(v) for v in meta["origin"].split())
    meta["nx"], meta["ny"] = nx, ny
    return meta, fields


def write_fields(grid: Grid, closure: ModelClosure, stem) -> Path:
    """CSV for 1-D grids, binary container for plane grids."""
    stem = Path(stem)
    if grid.ndim == 2:
        return write_grid_2d(grid, closure, stem.with_suffix(".grid"))
    return write_csv_1d(grid, closure, stem.with_suffix(".csv"))
