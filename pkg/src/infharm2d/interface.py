"""Interface graph: polylines, triple junctions and corners of the 2-D phase boundary.

Graph vertices are interface-band nodes.  Two band nodes are linked when
they are 4-neighbours, or diagonal neighbours sharing no band 4-neighbour
(mixed adjacency, which suppresses the spurious triangles plain
8-connectivity creates at staircase steps).  Vertices of degree >= 3 form
junctions; chains of degree-2 vertices between them are the polylines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phase import PhaseLabel, PhaseMap

_N4 = ((1, 0), (-1, 0), (0, 1), (0, -1))
_DIAG = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class Junction:
    x: float
    y: float
    degree: int
    members: tuple[int, ...] = ()


@dataclass(frozen=True)
class Corner:
    x: float
    y: float
    angle_deg: float
    piece: int


@dataclass
class Polyline:
    id: int
    vertices: np.ndarray
    closed: bool = False
    simplified: np.ndarray | None = None
    corner_idx: list[int] = field(default_factory=list)


@dataclass
class InterfaceGraph:
    nodes: np.ndarray
    degrees: np.ndarray
    edges: list[tuple[int, int]]
    polylines: list[Polyline]
    junctions: list[Junction]
    corners: list[Corner]
    h: float
    smooth_pieces: list[np.ndarray] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return len(self.nodes) == 0

    @classmethod
    def empty_graph(cls, h: float) -> "InterfaceGraph":
        return cls(np.zeros((0, 2)), np.zeros(0, dtype=int), [], [], [], [], h, [])


def _turn_deg(d_in: np.ndarray, d_out: np.ndarray) -> float:
    n_in = math.hypot(*d_in)
    n_out = math.hypot(*d_out)
    if n_in == 0.0 or n_out == 0.0:
        return 0.0
    c = float(np.dot(d_in, d_out)) / (n_in * n_out)
    return math.degrees(math.acos(max(-1.0, min(1.0, c))))


def turning_angles(vertices: np.ndarray, window: int = 3, closed: bool = False) -> np.ndarray:
    """Heading change at each vertex measured over chords of up to ``window`` steps.

    Open polylines get ``0`` at both endpoints; windows are clipped near them.
    """
    n = len(vertices)
    out = np.zeros(n)
    for i in range(n):
        if closed:
            kb = ka = min(window, max(1, (n - 1) // 2))
            prev, nxt = vertices[(i - kb) % n], vertices[(i + ka) % n]
        else:
            if i == 0 or i == n - 1:
                continue
            prev, nxt = vertices[i - min(window, i)], vertices[i + min(window, n - 1 - i)]
        out[i] = _turn_deg(vertices[i] - prev, nxt - vertices[i])
    return out


def detect_corners(vertices: np.ndarray, threshold_deg: float = 20.0, window: int = 3,
                   closed: bool = False) -> list[int]:
    """Indices of corner vertices: one per run of above-threshold turning, at the run's maximum.

    On open polylines the first and last ``window`` vertices are never corners:
    their chords are clipped, so a single raster step reads as a sharp turn.
    """
    ang = turning_angles(vertices, window, closed)
    hot = ang > threshold_deg
    if not closed:
        hot[:window] = False
        hot[max(0, len(hot) - window):] = False
    corners = []
    i, n = 0, len(vertices)
    while i < n:
        if hot[i]:
            j = i
            while j + 1 < n and hot[j + 1]:
                j += 1
            corners.append(i + int(np.argmax(ang[i:j + 1])))
            i = j + 1
        else:
            i += 1
    if closed and len(corners) >= 2 and hot[0] and hot[-1]:
        # the run wrapping around the seam counts once
        first, last = corners[0], corners[-1]
        corners = corners[1:-1] + [first if ang[first] >= ang[last] else last]
    return sorted(corners)


def simplify_collinear(vertices: np.ndarray, merge_deg: float = 1.0, keep=()) -> np.ndarray:
    """Drop vertices where the path turns by less than ``merge_deg``; endpoints and ``keep`` stay."""
    if len(vertices) <= 2:
        return vertices.copy()
    keep = set(keep)
    out = [vertices[0]]
    for j in range(1, len(vertices) - 1):
        if j in keep or _turn_deg(vertices[j] - out[-1], vertices[j + 1] - vertices[j]) >= merge_deg:
            out.append(vertices[j])
    out.append(vertices[-1])
    return np.asarray(out)


def _band_adjacency(band: np.ndarray):
    idx = -np.ones(band.shape, dtype=np.int64)
    pts = np.argwhere(band)
    idx[band] = np.arange(len(pts))
    nx, ny = band.shape

    def inside(i, j):
        return 0 <= i < nx and 0 <= j < ny

    nbrs: list[list[int]] = [[] for _ in range(len(pts))]
    for k, (i, j) in enumerate(pts):
        for di, dj in _N4:
            a, b = i + di, j + dj
            if inside(a, b) and band[a, b]:
                nbrs[k].append(int(idx[a, b]))
        for di, dj in _DIAG:
            a, b = i + di, j + dj
            if inside(a, b) and band[a, b] and not band[i + di, j] and not band[i, j + dj]:
                nbrs[k].append(int(idx[a, b]))
    return pts, nbrs


def extract_interface(pm: PhaseMap, corner_deg: float = 20.0, merge_deg: float = 1.0,
                      window: int = 3) -> InterfaceGraph:
    """Trace the boundary of the 2-D phase into polylines with junctions and corners."""
    h = pm.grid.h
    two = pm.labels == PhaseLabel.TWO_DIM
    band = pm.labels == PhaseLabel.INTERFACE_BAND
    if not two.any() or two.all() or not band.any():
        return InterfaceGraph.empty_graph(h)

    ij, nbrs = _band_adjacency(band)
    xs, ys = pm.grid.xs, pm.grid.ys
    coords = np.c_[xs[ij[:, 0]], ys[ij[:, 1]]]
    degrees = np.array([len(n) for n in nbrs], dtype=int)
    edges = sorted({(min(a, b), max(a, b)) for a, nb in enumerate(nbrs) for b in nb})

    # junction clusters: connected components of degree >= 3 vertices
    cluster = -np.ones(len(ij), dtype=np.int64)
    junctions: list[Junction] = []
    for start in np.flatnonzero(degrees >= 3):
        if cluster[start] >= 0:
            continue
        cid = len(junctions)
        stack, members = [int(start)], []
        cluster[start] = cid
        while stack:
            v = stack.pop()
            members.append(v)
            for w in nbrs[v]:
                if degrees[w] >= 3 and cluster[w] < 0:
                    cluster[w] = cid
                    stack.append(w)
        mset = set(members)
        external = sum(1 for v in members for w in nbrs[v] if w not in mset)
        cx, cy = coords[members].mean(axis=0)
        junctions.append(Junction(float(cx), float(cy), external, tuple(sorted(members))))

    def special(v):
        return degrees[v] != 2

    visited: set[tuple[int, int]] = set()
    chains: list[tuple[list[int], bool]] = []
    for s in sorted(range(len(ij)), key=lambda v: (not special(v), v)):
        if not special(s):
            continue
        for first in nbrs[s]:
            e = (min(s, first), max(s, first))
            if e in visited:
                continue
            visited.add(e)
            if cluster[s] >= 0 and cluster[s] == cluster[first]:
                continue  # edge inside a junction cluster
            path = [s, first]
            prev, cur = s, first
            while not special(cur):
                nxt = nbrs[cur][0] if nbrs[cur][0] != prev else nbrs[cur][1]
                visited.add((min(cur, nxt), max(cur, nxt)))
                path.append(nxt)
                prev, cur = cur, nxt
            chains.append((path, False))
    for a, b in edges:
        if (a, b) in visited:
            continue
        # remaining edges lie on loops of degree-2 vertices
        path = [a]
        prev, cur = a, b
        visited.add((a, b))
        while cur != a:
            path.append(cur)
            nxt = nbrs[cur][0] if nbrs[cur][0] != prev else nbrs[cur][1]
            visited.add((min(cur, nxt), max(cur, nxt)))
            prev, cur = cur, nxt
        chains.append((path, True))

    polylines, corners, smooth = [], [], []
    for pid, (path, closed) in enumerate(chains):
        verts = coords[path]
        cidx = detect_corners(verts, corner_deg, window, closed) if len(verts) >= 3 else []
        pl = Polyline(pid, verts, closed, simplify_collinear(verts, merge_deg, cidx), cidx)
        polylines.append(pl)
        for c in cidx:
            ang = turning_angles(verts, window, closed)[c]
            corners.append(Corner(float(verts[c, 0]), float(verts[c, 1]), float(ang), pid))
        cuts = [0] + cidx + [len(verts) - 1]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi > lo:
                smooth.append(verts[lo:hi + 1])

    return InterfaceGraph(coords, degrees, edges, polylines, junctions, corners, h, smooth)
