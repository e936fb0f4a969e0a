"""CSV and binary PPM emitters (and the phase-dump reader).

Floats are written with 17 significant digits so values round-trip exactly;
negative zeros are folded to ``0`` for byte-stable output.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .interface import InterfaceGraph
from .operator import GridSpec
from .phase import PhaseLabel, PhaseMap

FIELD_HEADER = ["x", "y", "u1", "u2", "du11", "du21", "du12", "du22", "res1", "res2", "rank_indicator"]
PHASE_HEADER = ["x", "y", "label", "indicator"]
INTERFACE_HEADER = ["piece", "vertex", "x", "y"]

PALETTE = {
    PhaseLabel.TWO_DIM: (255, 255, 255),
    PhaseLabel.ONE_DIM: (96, 96, 96),
    PhaseLabel.INTERFACE_BAND: (0, 0, 0),
}


def fmt(v: float) -> str:
    return format(float(v) + 0.0, ".17g")


def _node_rows(grid: GridSpec):
    xs, ys = grid.xs, grid.ys
    for i in range(grid.nx):
        for j in range(grid.ny):
            yield i, j, xs[i], ys[j]


def write_field_csv(path, grid: GridSpec, u, Du, residual, indicator) -> Path:
    """One row per node (x outer, y inner): value, gradient columns, residual, rank indicator."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(FIELD_HEADER) + "\n")
        for i, j, x, y in _node_rows(grid):
            d = Du[i, j]
            vals = (x, y, u[i, j, 0], u[i, j, 1], d[0, 0], d[1, 0], d[0, 1], d[1, 1],
                    residual[i, j, 0], residual[i, j, 1], indicator[i, j])
            fh.write(",".join(fmt(v) for v in vals) + "\n")
    return path


def write_phase_csv(path, pm: PhaseMap) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(PHASE_HEADER) + "\n")
        for i, j, x, y in _node_rows(pm.grid):
            label = PhaseLabel(int(pm.labels[i, j])).display
            fh.write(f"{fmt(x)},{fmt(y)},{label},{fmt(pm.rank_indicator[i, j])}\n")
    return path


def read_phase_csv(path, tol: float = 1e-8) -> PhaseMap:
    """Rebuild a :class:`PhaseMap` from :func:`write_phase_csv` output."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != PHASE_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = [(float(x), float(y), PhaseLabel.parse(lab), float(ind)) for x, y, lab, ind in reader]
    xs = sorted({r[0] for r in rows})
    ys = sorted({r[1] for r in rows})
    grid = GridSpec(xs[0], xs[-1], ys[0], ys[-1], len(xs), len(ys))
    if len(rows) != grid.nx * grid.ny:
        raise ValueError(f"{path}: {len(rows)} rows do not fill a {grid.nx}x{grid.ny} grid")
    labels = np.empty((grid.nx, grid.ny), dtype=np.int8)
    ind = np.empty((grid.nx, grid.ny))
    for k, (_, _, lab, v) in enumerate(rows):
        i, j = divmod(k, grid.ny)
        labels[i, j] = lab
        ind[i, j] = v
    return PhaseMap(grid, labels, ind, tol)


def phase_image(pm: PhaseMap) -> np.ndarray:
    """RGB array ``(ny, nx, 3)``; the top row is ``y = ymax``."""
    lut = np.zeros((3, 3), dtype=np.uint8)
    for lab, rgb in PALETTE.items():
        lut[int(lab)] = rgb
    return lut[pm.labels.T[::-1].astype(np.intp)]


def write_ppm(path, rgb: np.ndarray) -> Path:
    path = Path(path)
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())
    return path


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos].decode("ascii"))
    if tokens[0] != "P6":
        raise ValueError(f"{path}: not a binary PPM")
    w, h = int(tokens[1]), int(tokens[2])
    pixels = np.frombuffer(data[pos + 1:], dtype=np.uint8)
    return pixels.reshape(h, w, 3)


def write_interface_csv(path, ifg: InterfaceGraph) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(INTERFACE_HEADER) + "\n")
        for pl in ifg.polylines:
            for k, (x, y) in enumerate(pl.simplified):
                fh.write(f"{pl.id},{k},{fmt(x)},{fmt(y)}\n")
    return path


def interface_report_lines(ifg: InterfaceGraph) -> list[str]:
    lines = [f"junction {fmt(j.x)} {fmt(j.y)} {j.degree}" for j in ifg.junctions]
    lines += [f"corner {fmt(c.x)} {fmt(c.y)} {c.angle_deg:.6f}" for c in ifg.corners]
    return lines
