"""Phase decomposition into the 2-D phase, the 1-D phase and the interface band.

Nodes are classified by the rank indicator ``sigma2 / max(1, sigma1)`` of
``Du`` with a hysteresis band ``[tol/2, 2 tol]``.  The interface is the
discrete boundary of the 2-D phase: every non-2-D node with a 2-D
4-neighbour is relabelled as interface.  Closed-form oracles for the two
families with junctions (cases A and B) and the straight-diagonal map
give the exact sets to compare against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .linalg2 import DEFAULT_RANK_TOL, _check_tol, rank_eps, rank_indicator
from .maps import Jet2, SeparatedMap
from .operator import GridSpec


class PhaseLabel(enum.IntEnum):
    INTERFACE_BAND = 0
    ONE_DIM = 1
    TWO_DIM = 2

    @property
    def display(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def parse(cls, text: str) -> "PhaseLabel":
        return _FROM_DISPLAY[text.strip()]


_DISPLAY = {
    PhaseLabel.INTERFACE_BAND: "InterfaceBand",
    PhaseLabel.ONE_DIM: "OneDim",
    PhaseLabel.TWO_DIM: "TwoDim",
}
_FROM_DISPLAY = {v: k for k, v in _DISPLAY.items()}


class OracleCase(enum.Enum):
    A = "a"
    B = "b"
    DIAG = "diag"

    @classmethod
    def parse(cls, value) -> "OracleCase":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


def classify_point(jet: Jet2, tol: float = DEFAULT_RANK_TOL) -> tuple[PhaseLabel, float]:
    """Label of a single jet together with its rank indicator."""
    _check_tol(tol)
    ind = rank_indicator(jet.Du)
    if rank_eps(jet.Du, tol) == 2 and ind > 2.0 * tol:
        return PhaseLabel.TWO_DIM, ind
    if ind < 0.5 * tol:
        return PhaseLabel.ONE_DIM, ind
    return PhaseLabel.INTERFACE_BAND, ind


def _labels_from_indicator(ind: np.ndarray, tol: float) -> np.ndarray:
    labels = np.full(ind.shape, PhaseLabel.INTERFACE_BAND, dtype=np.int8)
    labels[ind > 2.0 * tol] = PhaseLabel.TWO_DIM
    labels[ind < 0.5 * tol] = PhaseLabel.ONE_DIM
    return labels


def _touches(mask: np.ndarray) -> np.ndarray:
    """Nodes with a 4-neighbour in ``mask``."""
    out = np.zeros_like(mask)
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


# analytic sets ---------------------------------------------------------------

def _ray_distance(x, y, lo=None, hi=None):
    """L-inf distance from (x, y) to the diagonal {(s, s) : lo <= s <= hi}."""
    s = 0.5 * (x + y)
    if lo is not None:
        s = np.maximum(s, lo)
    if hi is not None:
        s = np.minimum(s, hi)
    return np.maximum(np.abs(x - s), np.abs(y - s))


def sigma_distance(case, x, y):
    """L-inf distance from points to the analytic interface of ``case``."""
    case = OracleCase.parse(case)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if case is OracleCase.A:
        vert = np.maximum(np.abs(x), np.maximum(y, 0.0))
        horiz = np.maximum(np.abs(y), np.maximum(x, 0.0))
        return np.minimum(np.minimum(vert, horiz), _ray_distance(x, y, lo=0.0))
    if case is OracleCase.B:
        m = np.maximum(np.abs(x), np.abs(y))
        square = np.where(m <= 1.0, 1.0 - m,
                          np.maximum(np.maximum(np.abs(x) - 1.0, 0.0), np.maximum(np.abs(y) - 1.0, 0.0)))
        rays = np.minimum(_ray_distance(x, y, lo=1.0), _ray_distance(x, y, hi=-1.0))
        return np.minimum(square, rays)
    return _ray_distance(x, y)


def analytic_phase_oracle(case, x: float, y: float) -> PhaseLabel:
    """Exact phase membership for the closed-form families.

    Case A: 1-D phase ``{x, y < 0}``, interface its boundary plus ``{x = y >= 0}``.
    Case B: 1-D phase ``(-1, 1)^2``, interface its boundary plus ``{x = y, |y| >= 1}``.
    DIAG: interface ``{x = y}``, 2-D elsewhere (``K(t) = t`` near the origin).
    """
    case = OracleCase.parse(case)
    if case is OracleCase.A:
        if x < 0 and y < 0:
            return PhaseLabel.ONE_DIM
        if (x == 0 and y <= 0) or (y == 0 and x <= 0) or (x == y and x >= 0):
            return PhaseLabel.INTERFACE_BAND
        return PhaseLabel.TWO_DIM
    if case is OracleCase.B:
        if -1 < x < 1 and -1 < y < 1:
            return PhaseLabel.ONE_DIM
        if max(abs(x), abs(y)) == 1 or (x == y and abs(y) >= 1):
            return PhaseLabel.INTERFACE_BAND
        return PhaseLabel.TWO_DIM
    return PhaseLabel.INTERFACE_BAND if x == y else PhaseLabel.TWO_DIM


def oracle_labels(case, grid: GridSpec) -> np.ndarray:
    X, Y = grid.mesh()
    out = np.empty(X.shape, dtype=np.int8)
    for idx in np.ndindex(X.shape):
        out[idx] = analytic_phase_oracle(case, float(X[idx]), float(Y[idx]))
    return out


def oracle_sigma_samples(case, n: int = 50, extent: float = 3.0) -> np.ndarray:
    """Points placed exactly on the analytic interface, shape ``(k, 2)``."""
    case = OracleCase.parse(case)
    s = np.linspace(0.0, extent, n)
    if case is OracleCase.A:
        parts = [np.c_[np.zeros(n), -s], np.c_[-s, np.zeros(n)], np.c_[s, s]]
    elif case is OracleCase.B:
        e = np.linspace(-1.0, 1.0, n)
        r = np.linspace(1.0, extent, n)
        one = np.ones(n)
        parts = [np.c_[one, e], np.c_[-one, e], np.c_[e, one], np.c_[e, -one], np.c_[r, r], np.c_[-r, -r]]
    else:
        d = np.linspace(-extent, extent, n)
        parts = [np.c_[d, d]]
    return np.unique(np.concatenate(parts), axis=0)


# phase maps ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PhaseMap:
    """Node labels on a grid; arrays are indexed ``[ix, iy]``."""

    grid: GridSpec
    labels: np.ndarray
    rank_indicator: np.ndarray
    tol: float = DEFAULT_RANK_TOL

    def mask(self, label: PhaseLabel) -> np.ndarray:
        return self.labels == label

    def counts(self) -> dict[PhaseLabel, int]:
        return {lab: int(np.count_nonzero(self.labels == lab)) for lab in PhaseLabel}

    def interior(self, label: PhaseLabel, margin: int = 3) -> np.ndarray:
        """Nodes whose whole ``(2 margin + 1)^2`` neighbourhood carries ``label``."""
        keep = self.labels == label
        out = keep.copy()
        nx, ny = keep.shape
        for di in range(-margin, margin + 1):
            for dj in range(-margin, margin + 1):
                shifted = np.zeros_like(keep)
                xs = slice(max(0, -di), min(nx, nx - di))
                ys = slice(max(0, -dj), min(ny, ny - dj))
                xd = slice(max(0, di), min(nx, nx + di))
                yd = slice(max(0, dj), min(ny, ny + dj))
                shifted[xs, ys] = keep[xd, yd]
                out &= shifted
        return out

    def points(self, mask: np.ndarray) -> np.ndarray:
        X, Y = self.grid.mesh()
        return np.c_[X[mask], Y[mask]]

    def same_as(self, other: "PhaseMap") -> bool:
        return (self.grid == other.grid
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.rank_indicator, other.rank_indicator))


def build_phase_map(m: SeparatedMap, grid: GridSpec, tol: float = DEFAULT_RANK_TOL, jets=None) -> PhaseMap:
    """Classify every grid node, then mark the discrete boundary of the 2-D phase."""
    _check_tol(tol)
    if jets is None:
        jets = m.grid_jets(grid.xs, grid.ys, values=False)
    ind = kernels.indicator(jets.Du)
    labels = _labels_from_indicator(ind, tol)
    two = labels == PhaseLabel.TWO_DIM
    labels[~two & _touches(two)] = PhaseLabel.INTERFACE_BAND
    return PhaseMap(grid, labels, ind, tol)


@dataclass(frozen=True)
class OracleAgreement:
    checked: int
    mismatches: int
    excluded: int
    margin: float

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.checked > 0


def oracle_agreement(pm: PhaseMap, case, margin_factor: float = 2.0) -> OracleAgreement:
    """Compare labels with the oracle at nodes farther than ``margin_factor * h`` from the interface."""
    X, Y = pm.grid.mesh()
    margin = margin_factor * pm.grid.h
    far = sigma_distance(case, X, Y) > margin
    truth = oracle_labels(case, pm.grid)
    bad = far & (truth != pm.labels)
    return OracleAgreement(int(far.sum()), int(bad.sum()), int((~far).sum()), margin)
