"""Structure checks for separated-variables solutions.

* affine on the 1-D phase (second derivatives vanish there),
* rank-one characterisation ``f'(x) = +-g'(y)``, ``f''(x) = -g''(y)`` on the
  closure of the 1-D phase,
* dichotomy on smooth interface pieces: diagonal (slope +-1) or affine,
* discontinuity of the nullspace projection across the interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg2 import DEFAULT_RANK_TOL, nullspace_projection, svd2
from .maps import SeparatedMap
from .interface import InterfaceGraph


@dataclass(frozen=True)
class AffineReport:
    max_second_derivative: float
    samples: int
    threshold: float

    @property
    def vacuous(self) -> bool:
        return self.samples == 0

    @property
    def ok(self) -> bool:
        return self.vacuous or self.max_second_derivative <= self.threshold

    @property
    def status(self) -> str:
        return "vacuous" if self.vacuous else ("pass" if self.ok else "fail")


def _second_derivs(m: SeparatedMap, pts: np.ndarray):
    _, fpp = m.f_derivatives(pts[:, 0])
    _, gpp = m.g_derivatives(pts[:, 1])
    return fpp, gpp


def check_prop2_affine(m: SeparatedMap, samples, threshold: float = 1e-10) -> AffineReport:
    """Max of ``|Hxx| + |Hyy| + |Hxy|`` over samples inside the 1-D phase."""
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return AffineReport(0.0, 0, threshold)
    fpp, gpp = _second_derivs(m, pts)
    # mixed derivative of f(x) + g(y) is identically zero
    total = np.hypot(fpp[:, 0], fpp[:, 1]) + np.hypot(gpp[:, 0], gpp[:, 1])
    return AffineReport(float(total.max()), len(pts), threshold)


@dataclass(frozen=True)
class Rank1Report:
    worst_tangent: float
    worst_curvature: float
    worst_point: tuple[float, float]
    samples: int
    eps: float

    @property
    def worst(self) -> float:
        return max(self.worst_tangent, self.worst_curvature)

    @property
    def ok(self) -> bool:
        return self.worst <= self.eps


def rank1_violations(m: SeparatedMap, samples) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample ``min |f' -+ g'|`` and ``|f'' + g''|``."""
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    fp, fpp = m.f_derivatives(pts[:, 0])
    gp, gpp = m.g_derivatives(pts[:, 1])
    tangent = np.minimum(np.linalg.norm(fp - gp, axis=1), np.linalg.norm(fp + gp, axis=1))
    curvature = np.linalg.norm(fpp + gpp, axis=1)
    return tangent, curvature


def check_rank1_characterization(m: SeparatedMap, samples, eps: float = 1e-8) -> Rank1Report:
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return Rank1Report(0.0, 0.0, (math.nan, math.nan), 0, eps)
    tangent, curvature = rank1_violations(m, pts)
    k = int(np.argmax(np.maximum(tangent, curvature)))
    return Rank1Report(float(tangent.max()), float(curvature.max()),
                       (float(pts[k, 0]), float(pts[k, 1])), len(pts), eps)


def tls_direction(points: np.ndarray) -> np.ndarray:
    """Unit principal direction of a point cloud (total least squares line fit)."""
    c = points - points.mean(axis=0)
    return svd2(c.T @ c).u1


@dataclass(frozen=True)
class PieceVerdict:
    start: tuple[float, float]
    end: tuple[float, float]
    vertices: int
    slope: float
    diagonal: bool
    affine: bool
    max_curvature: float

    @property
    def ok(self) -> bool:
        return self.diagonal or self.affine

    @property
    def branch(self) -> str:
        if self.diagonal:
            return "diagonal"
        return "affine" if self.affine else "neither"


@dataclass
class DichotomyReport:
    pieces: list[PieceVerdict] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.pieces)

    @property
    def failures(self) -> int:
        return sum(not p.ok for p in self.pieces)


def _slope(direction: np.ndarray) -> float:
    dx, dy = direction
    # direction is unit length; anything this flat in x is a vertical piece
    return math.inf if abs(dx) < 1e-12 else dy / dx


def check_prop2_dichotomy(ifg: InterfaceGraph, m: SeparatedMap, slope_tol: float = 0.1,
                          affine_tol: float = 1e-8, window: int = 5) -> DichotomyReport:
    """Classify each corner- and junction-free piece as diagonal or affine.

    The slope is fitted by total least squares on every run of ``window``
    consecutive vertices; a piece is diagonal when all runs agree on a slope
    within ``slope_tol`` of the same ``+-1``.  It is affine when
    ``|f''(x)|`` and ``|g''(y)|`` stay below ``affine_tol`` at all its vertices.
    """
    report = DichotomyReport()
    for verts in ifg.smooth_pieces:
        if len(verts) < 3:
            report.skipped += 1
            continue
        w = min(window, len(verts))
        slopes = np.array([_slope(tls_direction(verts[i:i + w])) for i in range(len(verts) - w + 1)])
        diagonal = bool(np.all(np.abs(slopes - 1.0) <= slope_tol) or np.all(np.abs(slopes + 1.0) <= slope_tol))
        fpp, gpp = _second_derivs(m, verts)
        curv = float(max(np.hypot(fpp[:, 0], fpp[:, 1]).max(), np.hypot(gpp[:, 0], gpp[:, 1]).max()))
        report.pieces.append(PieceVerdict(
            tuple(map(float, verts[0])), tuple(map(float, verts[-1])), len(verts),
            float(np.median(slopes)), diagonal, curv <= affine_tol, curv,
        ))
    return report


def projection_at(m: SeparatedMap, x: float, y: float, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    fp, _ = m.f_derivatives(float(x))
    gp, _ = m.g_derivatives(float(y))
    return nullspace_projection(np.column_stack((fp, gp)), tol)


def projection_jump(m: SeparatedMap, p, normal, delta: float, tol: float = DEFAULT_RANK_TOL) -> float:
    """Oscillation of ``[Du]perp`` over ``{p - delta n, p, p + delta n}`` (Frobenius norm).

    The centre is included because across a slit (an interface with the 2-D
    phase on both sides) the projection is zero on both sides and jumps only
    at the interface itself.
    """
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    p = np.asarray(p, dtype=float)
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    lo = projection_at(m, *(p - delta * n), tol)
    mid = projection_at(m, *p, tol)
    hi = projection_at(m, *(p + delta * n), tol)
    return float(max(np.linalg.norm(hi - lo), np.linalg.norm(mid - lo), np.linalg.norm(hi - mid)))
