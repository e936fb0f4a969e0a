"""Turning-angle profiles, unit-speed planar curves and separated-variables maps.

A profile ``K`` defines the curve ``f(t) = int_0^t (cos K(s), sin K(s)) ds``,
so ``f'(t) = (cos K, sin K)`` and ``f''(t) = K'(t) (-sin K, cos K)`` are known
in closed form; only ``f`` itself needs quadrature.  Maps have the form
``u(x, y) = f(x) + g(y)``, and ``g = -f`` gives the family
``u(x, y) = int_y^x e^{iK}``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .quadrature import integrate

HALF_PI = 0.5 * math.pi


class ExtrapolationError(ValueError):
    """A tabulated profile was queried outside its knot range."""


class KProfile:
    """Base class for C^1 turning-angle profiles.

    Subclasses implement :meth:`eval`, returning ``(K(t), K'(t))`` for scalar
    or array ``t``.
    """

    kind: str = "abstract"

    def eval(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.eval(t)

    def breakpoints(self) -> tuple[float, ...]:
        """Parameters where the profile switches formula."""
        return ()

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class ZeroProfile(KProfile):
    kind = "zero"

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return (float(z), float(z)) if z.ndim == 0 else (z, z.copy())


@dataclass(frozen=True)
class ExampleA(KProfile):
    """``K(t) = 1 - (t^2 + 1)^-1`` for ``t > 0`` and ``0`` otherwise."""

    kind = "example_a"

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        pos = t > 0.0
        tp = np.where(pos, t, 0.0)
        q = tp * tp + 1.0
        # t^2/(t^2+1) avoids cancellation near the breakpoint
        k = np.where(pos, tp * tp / q, 0.0)
        dk = np.where(pos, 2.0 * tp / (q * q), 0.0)
        return _out(t, k, dk)

    def breakpoints(self):
        return (0.0,)


@dataclass(frozen=True)
class ExampleB(KProfile):
    """Flat on ``[-1, 1]``, odd, increasing towards ``+-1`` outside."""

    kind = "example_b"

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        right = t > 1.0
        left = t < -1.0
        s = np.where(right, t - 1.0, np.where(left, t + 1.0, 0.0))
        q = s * s + 1.0
        mag = s * s / q
        dmag = 2.0 * s / (q * q)
        k = np.where(right, mag, np.where(left, -mag, 0.0))
        dk = np.where(right, dmag, np.where(left, -dmag, 0.0))
        return _out(t, k, dk)

    def breakpoints(self):
        return (-1.0, 1.0)


@dataclass(frozen=True)
class LinearProfile(KProfile):
    """``K(t) = slope * t``.  Only satisfies ``sup|K| < pi/2`` on bounded sets."""

    slope: float = 1.0
    kind = "linear"

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return _out(t, self.slope * t, np.full_like(t, self.slope))


@dataclass(frozen=True)
class TabulatedProfile(KProfile):
    """Cubic Hermite interpolation of knots ``(t, K, K')``; C^1 by construction."""

    t: tuple[float, ...]
    k: tuple[float, ...]
    dk: tuple[float, ...]
    kind = "tabulated"

    def __post_init__(self):
        if len(self.t) < 2 or not (len(self.t) == len(self.k) == len(self.dk)):
            raise ValueError("tabulated profile needs >= 2 knots with matching K and K' columns")
        if any(b <= a for a, b in zip(self.t[:-1], self.t[1:])):
            raise ValueError("knot parameters must be strictly increasing")
        if not all(math.isfinite(v) for v in (*self.t, *self.k, *self.dk)):
            raise ValueError("knots contain non-finite values")

    @classmethod
    def from_knots(cls, knots) -> "TabulatedProfile":
        knots = sorted((float(a), float(b), float(c)) for a, b, c in knots)
        t, k, dk = zip(*knots)
        return cls(tuple(t), tuple(k), tuple(dk))

    @classmethod
    def from_csv(cls, path) -> "TabulatedProfile":
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                if not rec or rec[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append(tuple(float(v) for v in rec[:3]))
                except ValueError:
                    if rows:
                        raise
                    continue  # header row
        return cls.from_knots(rows)

    def domain(self):
        return (self.t[0], self.t[-1])

    def breakpoints(self):
        return self.t

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.t[0], self.t[-1]
        if np.any(t < lo) or np.any(t > hi):
            raise ExtrapolationError(f"tabulated profile defined on [{lo}, {hi}] only")
        knots = np.asarray(self.t)
        kv = np.asarray(self.k)
        dv = np.asarray(self.dk)
        i = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(knots) - 2)
        width = knots[i + 1] - knots[i]
        s = (t - knots[i]) / width
        s2 = s * s
        s3 = s2 * s
        k = ((2 * s3 - 3 * s2 + 1) * kv[i] + (s3 - 2 * s2 + s) * width * dv[i]
             + (-2 * s3 + 3 * s2) * kv[i + 1] + (s3 - s2) * width * dv[i + 1])
        dk = ((6 * s2 - 6 * s) * (kv[i] - kv[i + 1]) / width
              + (3 * s2 - 4 * s + 1) * dv[i] + (3 * s2 - 2 * s) * dv[i + 1])
        return _out(t, k, dk)


def _out(t, k, dk):
    if np.ndim(t) == 0:
        return float(k), float(dk)
    return k, dk


def k_eval(profile: KProfile, t: float) -> tuple[float, float]:
    """``(K(t), K'(t))``."""
    if not math.isfinite(t):
        raise ValueError(f"parameter must be finite, got {t!r}")
    return profile.eval(float(t))


@dataclass(frozen=True)
class SupKReport:
    max_abs_k: float
    argmax: float
    ok: bool

    @property
    def threshold(self) -> float:
        return HALF_PI


def sup_k_check(profile: KProfile, interval: tuple[float, float], samples: int = 10_000) -> SupKReport:
    """Sampled ``max |K|`` on ``interval`` and whether it stays below ``pi/2``."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    lo, hi = interval
    dlo, dhi = profile.domain()
    ts = np.linspace(max(lo, dlo), min(hi, dhi), samples)
    k, _ = profile.eval(ts)
    j = int(np.argmax(np.abs(k)))
    m = float(abs(k[j]))
    return SupKReport(m, float(ts[j]), m < HALF_PI)


def _unit_tangent(profile: KProfile):
    def integrand(s):
        k, _ = profile.eval(s)
        return np.stack((np.cos(k), np.sin(k)), axis=-1)

    return integrand


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """Unit-speed curve ``f(t) = int_0^t e^{iK(s)} ds`` on a bounded support.

    ``f`` is tabulated at integer anchors when the curve is built; an
    evaluation integrates only from the nearest anchor, with the profile's
    breakpoints as panel edges.
    """

    profile: KProfile
    support: tuple[float, float] = (-10.0, 10.0)
    tol: float = 1e-12
    _anchors: np.ndarray = field(init=False, repr=False)
    _values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.support)
        dlo, dhi = self.profile.domain()
        lo, hi = max(lo, dlo), min(hi, dhi)
        if not lo < hi:
            raise ValueError(f"empty curve support {self.support}")
        object.__setattr__(self, "support", (lo, hi))
        integrand = _unit_tangent(self.profile)
        bps = self.profile.breakpoints()
        a_lo, a_hi = math.ceil(lo), math.floor(hi)
        anchors = [0.0]
        values = [np.zeros(2)]
        # walk outwards from 0 so each anchor depends only on its neighbour
        for step in (1, -1):
            n, prev = 0, np.zeros(2)
            while a_lo <= n + step <= a_hi:
                piece = integrate(integrand, float(n), float(n + step), self.tol, bps)
                prev = prev + piece
                n += step
                anchors.append(float(n))
                values.append(prev)
        order = np.argsort(anchors)
        object.__setattr__(self, "_anchors", np.asarray(anchors)[order])
        object.__setattr__(self, "_values", np.asarray(values)[order])

    def contains(self, t) -> bool:
        t = np.asarray(t)
        return bool(np.all((t >= self.support[0]) & (t <= self.support[1])))

    def position(self, t: float) -> np.ndarray:
        if not self.contains(t):
            raise ValueError(f"t={t} outside curve support {self.support}")
        j = int(np.argmin(np.abs(self._anchors - t)))
        a = float(self._anchors[j])
        if t == a:
            return self._values[j].copy()
        rem = integrate(_unit_tangent(self.profile), a, float(t), self.tol, self.profile.breakpoints())
        return self._values[j] + rem

    def positions(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return np.array([self.position(float(t)) for t in ts.ravel()]).reshape(ts.shape + (2,))

    def derivatives(self, ts):
        """``(f'(t), f''(t))`` in closed form, for scalar or array ``t``."""
        k, dk = self.profile.eval(ts)
        c, s = np.cos(k), np.sin(k)
        fp = np.stack((c, s), axis=-1)
        fpp = np.stack((-dk * s, dk * c), axis=-1)
        return fp + 0.0, fpp + 0.0


def curve_jet(c: PlanarCurve, t: float):
    """``(f(t), f'(t), f''(t))``."""
    fp, fpp = c.derivatives(float(t))
    return c.position(float(t)), fp, fpp


class Sign(enum.Enum):
    PLUS_G = "plus_g"
    MINUS_F = "minus_f"


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and the three distinct second derivatives at a point.

    ``Du[alpha, i]`` is the ``i``-th partial of component ``alpha``.
    """

    u: np.ndarray
    Du: np.ndarray
    Hxx: np.ndarray
    Hxy: np.ndarray
    Hyy: np.ndarray


@dataclass(frozen=True)
class GridJets:
    """Analytic jets on a tensor grid; arrays are indexed ``[ix, iy, ...]``."""

    u: np.ndarray
    Du: np.ndarray
    Hxx: np.ndarray
    Hxy: np.ndarray
    Hyy: np.ndarray

    def at(self, i: int, j: int) -> Jet2:
        return Jet2(self.u[i, j], self.Du[i, j], self.Hxx[i, j], self.Hxy[i, j], self.Hyy[i, j])


@dataclass(frozen=True, eq=False)
class SeparatedMap:
    """``u(x, y) = f(x) + g(y)``; with ``Sign.MINUS_F`` the map is ``f(x) - f(y)``."""

    fcurve: PlanarCurve
    gcurve: PlanarCurve
    gsign: Sign = Sign.MINUS_F

    def __post_init__(self):
        if self.gsign is Sign.MINUS_F and self.gcurve.profile != self.fcurve.profile:
            raise ValueError("MINUS_F maps need identical f and g profiles")

    @classmethod
    def minus_f(cls, profile: KProfile, support=(-10.0, 10.0), tol: float = 1e-12) -> "SeparatedMap":
        c = PlanarCurve(profile, support, tol)
        return cls(c, c, Sign.MINUS_F)

    @classmethod
    def plus_g(cls, fprofile: KProfile, gprofile: KProfile | None = None,
               support=(-10.0, 10.0), tol: float = 1e-12) -> "SeparatedMap":
        fc = PlanarCurve(fprofile, support, tol)
        gc = fc if gprofile is None or gprofile == fprofile else PlanarCurve(gprofile, support, tol)
        return cls(fc, gc, Sign.PLUS_G)

    @property
    def _gs(self) -> float:
        return -1.0 if self.gsign is Sign.MINUS_F else 1.0

    def f_derivatives(self, xs):
        return self.fcurve.derivatives(xs)

    def g_derivatives(self, ys):
        gp, gpp = self.gcurve.derivatives(ys)
        return self._gs * gp + 0.0, self._gs * gpp + 0.0

    def g_position(self, y: float) -> np.ndarray:
        return self._gs * self.gcurve.position(y) + 0.0

    def __call__(self, x: float, y: float) -> np.ndarray:
        return self.fcurve.position(float(x)) + self.g_position(float(y))

    def grid_values(self, xs, ys) -> np.ndarray:
        fx = self.fcurve.positions(xs)
        gy = self._gs * self.gcurve.positions(ys)
        return fx[:, None, :] + gy[None, :, :]

    def grid_jets(self, xs, ys, values: bool = True) -> GridJets:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        nx, ny = len(xs), len(ys)
        fp, fpp = self.f_derivatives(xs)
        gp, gpp = self.g_derivatives(ys)
        Du = np.empty((nx, ny, 2, 2))
        Du[:, :, :, 0] = fp[:, None, :]
        Du[:, :, :, 1] = gp[None, :, :]
        Hxx = np.broadcast_to(fpp[:, None, :], (nx, ny, 2)).copy()
        Hyy = np.broadcast_to(gpp[None, :, :], (nx, ny, 2)).copy()
        u = self.grid_values(xs, ys) if values else np.full((nx, ny, 2), np.nan)
        return GridJets(u, Du, Hxx, np.zeros((nx, ny, 2)), Hyy)


def map_jet(m: SeparatedMap, x: float, y: float) -> Jet2:
    """Analytic second-order jet of a separated map (mixed derivative is zero)."""
    fp, fpp = m.f_derivatives(float(x))
    gp, gpp = m.g_derivatives(float(y))
    return Jet2(m(x, y), np.column_stack((fp, gp)), fpp, np.zeros(2), gpp)


def load_profile(kind: str, slope: float | None = None, knots_file: str | Path | None = None) -> KProfile:
    kind = kind.strip().lower()
    if kind == "zero":
        return ZeroProfile()
    if kind == "example_a":
        return ExampleA()
    if kind == "example_b":
        return ExampleB()
    if kind == "linear":
        return LinearProfile(1.0 if slope is None else float(slope))
    if kind == "tabulated":
        if knots_file is None:
            raise ValueError("tabulated profile needs a knots file")
        return TabulatedProfile.from_csv(knots_file)
    raise ValueError(f"unknown profile kind {kind!r}")
