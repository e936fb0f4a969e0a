"""The infinity-Laplacian of planar maps, finite-difference jets and the sup-gradient energy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .linalg2 import DEFAULT_RANK_TOL, _check_tol, nullspace_projection
from .maps import Jet2, SeparatedMap

UNIT_SPEED_TOL = 1e-12


class NotUnitSpeedError(ValueError):
    """The separated closed form was given curve derivatives with ``|f'| != 1``."""


@dataclass(frozen=True)
class Residual:
    value: np.ndarray
    tangential_part: np.ndarray
    normal_part: np.ndarray


@dataclass(frozen=True)
class GridSpec:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"degenerate grid extent {self}")
        if int(self.nx) < 2 or int(self.ny) < 2:
            raise ValueError("grid needs nx, ny >= 2")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))

    @classmethod
    def square(cls, lo: float, hi: float, n: int) -> "GridSpec":
        return cls(lo, hi, lo, hi, n, n)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    @property
    def hx(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.ymax - self.ymin) / (self.ny - 1)

    @property
    def h(self) -> float:
        return max(self.hx, self.hy)

    def mesh(self):
        """``(X, Y)`` arrays indexed ``[ix, iy]``."""
        return np.meshgrid(self.xs, self.ys, indexing="ij")


def infinity_laplacian(jet: Jet2, tol: float = DEFAULT_RANK_TOL) -> Residual:
    """Index form ``D_i u_a D_j u_b D2_ij u_b + |Du|^2 [Du]perp_ab D2_ii u_b``.

    ``|Du|`` is the Frobenius norm; the projection uses the same relative rank
    tolerance as phase classification.
    """
    _check_tol(tol)
    Du = np.asarray(jet.Du, dtype=float)
    t0, t1, n0, n1 = kernels._laplacian_core(
        Du[0, 0], Du[0, 1], Du[1, 0], Du[1, 1],
        jet.Hxx[0], jet.Hxx[1], jet.Hxy[0], jet.Hxy[1], jet.Hyy[0], jet.Hyy[1], tol,
    )
    tan = np.array([t0, t1]) + 0.0
    nor = np.array([n0, n1]) + 0.0
    return Residual(tan + nor, tan, nor)


def infinity_laplacian_separated(fjet, gjet, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Closed form ``2 [(f', g')]perp (f'' + g'')`` for ``u = f(x) + g(y)`` with unit-speed curves.

    ``fjet`` and ``gjet`` are ``(value, first, second)`` derivative triples; the
    values are unused.
    """
    _, fp, fpp = (np.asarray(v, dtype=float) for v in fjet)
    _, gp, gpp = (np.asarray(v, dtype=float) for v in gjet)
    for name, v in (("f'", fp), ("g'", gp)):
        if abs(math.hypot(v[0], v[1]) - 1.0) > UNIT_SPEED_TOL:
            raise NotUnitSpeedError(f"|{name}| = {math.hypot(v[0], v[1])!r}, expected 1")
    P = nullspace_projection(np.column_stack((fp, gp)), tol)
    return 2.0 * P @ (fpp + gpp) + 0.0


def numerical_jet(evaluate: Callable[[float, float], np.ndarray], x: float, y: float, h: float) -> Jet2:
    """Second-order central-difference jet from point evaluations on the 9-point stencil."""
    if not h > 0.0:
        raise ValueError(f"step must be positive, got {h!r}")
    u = {(i, j): np.asarray(evaluate(x + i * h, y + j * h), dtype=float)
         for i in (-1, 0, 1) for j in (-1, 0, 1)}
    dx = (u[1, 0] - u[-1, 0]) / (2 * h)
    dy = (u[0, 1] - u[0, -1]) / (2 * h)
    hxx = (u[1, 0] - 2 * u[0, 0] + u[-1, 0]) / (h * h)
    hyy = (u[0, 1] - 2 * u[0, 0] + u[0, -1]) / (h * h)
    hxy = (u[1, 1] - u[1, -1] - u[-1, 1] + u[-1, -1]) / (4 * h * h)
    return Jet2(u[0, 0], np.column_stack((dx, dy)), hxx, hxy, hyy)


def jet_error(a: Jet2, b: Jet2) -> float:
    """Largest entry-wise difference between two jets."""
    return float(max(np.max(np.abs(np.asarray(p) - np.asarray(q)))
                     for p, q in zip((a.u, a.Du, a.Hxx, a.Hxy, a.Hyy), (b.u, b.Du, b.Hxx, b.Hxy, b.Hyy))))


def straddles_breakpoint(m: SeparatedMap, x: float, y: float, h: float) -> bool:
    """True when the FD stencil around ``(x, y)`` crosses a profile breakpoint (u only C^2 there)."""
    bx = m.fcurve.profile.breakpoints()
    by = m.gcurve.profile.breakpoints()
    return any(x - h <= b <= x + h for b in bx) or any(y - h <= b <= y + h for b in by)


@dataclass(frozen=True)
class ConvergenceProbe:
    steps: tuple[float, ...]
    errors: tuple[float, ...]
    orders: tuple[float, ...]
    reduced_order: bool

    @property
    def exact(self) -> bool:
        return max(self.errors) < 1e-13


def fd_convergence(m: SeparatedMap, x: float, y: float, steps=(1e-2, 5e-3, 2.5e-3)) -> ConvergenceProbe:
    """Observed order of :func:`numerical_jet` against the analytic jet at ``(x, y)``."""
    from .maps import map_jet

    exact = map_jet(m, x, y)
    errors = tuple(jet_error(numerical_jet(m, x, y, h), exact) for h in steps)
    orders = tuple(
        math.log(e0 / e1) / math.log(h0 / h1) if e0 > 0 and e1 > 0 else math.nan
        for (e0, e1, h0, h1) in zip(errors[:-1], errors[1:], steps[:-1], steps[1:])
    )
    return ConvergenceProbe(tuple(steps), errors, orders, straddles_breakpoint(m, x, y, max(steps)))


@dataclass(frozen=True)
class GridResidual:
    grid: GridSpec
    value: np.ndarray
    tangential_part: np.ndarray
    normal_part: np.ndarray

    @property
    def norms(self) -> np.ndarray:
        return np.hypot(self.value[..., 0], self.value[..., 1])

    @property
    def max_norm(self) -> float:
        return float(self.norms.max())


def grid_residual(m: SeparatedMap, grid: GridSpec, tol: float = DEFAULT_RANK_TOL, jets=None) -> GridResidual:
    """Index-form residual from analytic jets at every grid node."""
    _check_tol(tol)
    if jets is None:
        jets = m.grid_jets(grid.xs, grid.ys, values=False)
    val, tan, nor = kernels.laplacian(jets.Du, jets.Hxx, jets.Hxy, jets.Hyy, tol)
    return GridResidual(grid, val, tan, nor)


def grid_residual_separated(m: SeparatedMap, grid: GridSpec, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Closed-form residual ``2 P (f''(x) + g''(y))`` at every node, shape ``(nx, ny, 2)``."""
    _check_tol(tol)
    fp, fpp = m.f_derivatives(grid.xs)
    gp, gpp = m.g_derivatives(grid.ys)
    for name, v in (("f'", fp), ("g'", gp)):
        if np.max(np.abs(np.hypot(v[:, 0], v[:, 1]) - 1.0)) > UNIT_SPEED_TOL:
            raise NotUnitSpeedError(f"{name} is not unit speed on the grid")
    nx, ny = grid.nx, grid.ny
    Du = np.empty((nx, ny, 2, 2))
    Du[:, :, :, 0] = fp[:, None, :]
    Du[:, :, :, 1] = gp[None, :, :]
    P = kernels.projection(Du, tol)
    lap = fpp[:, None, :] + gpp[None, :, :]
    return 2.0 * np.einsum("xyab,xyb->xya", P, lap) + 0.0


def e_infinity_estimate(m: SeparatedMap, grid: GridSpec) -> float:
    """Grid maximum of the Frobenius norm ``|Du|``."""
    fp, _ = m.f_derivatives(grid.xs)
    gp, _ = m.g_derivatives(grid.ys)
    fx = np.einsum("xa,xa->x", fp, fp)
    gy = np.einsum("ya,ya->y", gp, gp)
    return float(np.sqrt(np.max(fx[:, None] + gy[None, :])))
