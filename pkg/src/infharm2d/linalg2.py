"""Exact-size linear algebra for 2-vectors and 2x2 matrices.

Matrices are ``numpy`` arrays of shape ``(2, 2)`` indexed ``M[alpha, i]``;
column ``i`` is the ``i``-th partial derivative vector when ``M`` is a
gradient.  The SVD is closed form (two rotation angles), so results are
deterministic to the last bit for a given input.

The ``_core`` helpers take and return plain floats.  They are registered as
numba-jitable so the grid kernels can inline them; called from Python they
run as ordinary functions.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._accel import register_jitable

DEFAULT_RANK_TOL = 1e-8


class InvalidToleranceError(ValueError):
    """Raised for a rank tolerance that is not strictly positive."""


class Svd2(NamedTuple):
    sigma1: float
    sigma2: float
    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    @property
    def U(self) -> np.ndarray:
        return np.column_stack((self.u1, self.u2))

    @property
    def V(self) -> np.ndarray:
        return np.column_stack((self.v1, self.v2))

    def reconstruct(self) -> np.ndarray:
        return self.sigma1 * np.outer(self.u1, self.v1) + self.sigma2 * np.outer(self.u2, self.v2)


def vec2(x: float, y: float) -> np.ndarray:
    v = np.array([x, y], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector component: {v}")
    return v


def expi(a: float) -> np.ndarray:
    """The unit vector ``(cos a, sin a)``."""
    return np.array([math.cos(a), math.sin(a)])


def mat2_from_columns(c1, c2) -> np.ndarray:
    return np.column_stack((np.asarray(c1, dtype=float), np.asarray(c2, dtype=float)))


@register_jitable
def _svd2_core(a, b, c, d):
    # M = [[a, b], [c, d]] = R(phi) diag(s1, s2') R(theta)
    e = 0.5 * (a + d)
    f = 0.5 * (a - d)
    g = 0.5 * (c + b)
    h = 0.5 * (c - b)
    q = math.hypot(e, h)
    r = math.hypot(f, g)
    s1 = q + r
    s2 = q - r
    a1 = math.atan2(g, f)
    a2 = math.atan2(h, e)
    theta = 0.5 * (a2 - a1)
    phi = 0.5 * (a2 + a1)
    cp = math.cos(phi)
    sp = math.sin(phi)
    ct = math.cos(theta)
    st = math.sin(theta)
    u1x, u1y = cp, sp
    u2x, u2y = -sp, cp
    v1x, v1y = ct, -st
    v2x, v2y = st, ct
    if s2 < 0.0:
        v2x = -v2x
        v2y = -v2y
    # |det| / s1 keeps relative accuracy of a tiny second singular value
    if s1 > 0.0:
        s2 = abs(a * d - b * c) / s1
        if s2 > s1:
            s2 = s1
    else:
        s2 = 0.0
    # sign convention: first nonzero component of each u_i is nonnegative
    if u1x < 0.0 or (u1x == 0.0 and u1y < 0.0):
        u1x, u1y, v1x, v1y = -u1x, -u1y, -v1x, -v1y
    if u2x < 0.0 or (u2x == 0.0 and u2y < 0.0):
        u2x, u2y, v2x, v2y = -u2x, -u2y, -v2x, -v2y
    return s1, s2, u1x, u1y, u2x, u2y, v1x, v1y, v2x, v2y


@register_jitable
def _rank_core(s1, s2, tol):
    thr = tol * max(1.0, s1)
    rank = 0
    if s1 > thr:
        rank += 1
    if s2 > thr:
        rank += 1
    return rank


@register_jitable
def _indicator_core(a, b, c, d):
    out = _svd2_core(a, b, c, d)
    return out[1] / max(1.0, out[0])


@register_jitable
def _projection_core(a, b, c, d, tol):
    """Entries (p11, p12, p21, p22) of the projection onto range(M)^perp."""
    s1, s2, u1x, u1y, u2x, u2y, _, _, _, _ = _svd2_core(a, b, c, d)
    rank = _rank_core(s1, s2, tol)
    if rank == 2:
        return 0.0, 0.0, 0.0, 0.0
    if rank == 1:
        return u2x * u2x, u2x * u2y, u2y * u2x, u2y * u2y
    return 1.0, 0.0, 0.0, 1.0


def _check_tol(tol: float) -> None:
    if not (tol > 0.0) or not math.isfinite(tol):
        raise InvalidToleranceError(f"rank tolerance must be positive and finite, got {tol!r}")


def _entries(M) -> tuple[float, float, float, float]:
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return float(M[0, 0]), float(M[0, 1]), float(M[1, 0]), float(M[1, 1])


def svd2(M) -> Svd2:
    """Closed-form singular value decomposition of a 2x2 matrix.

    Singular values are ordered ``sigma1 >= sigma2 >= 0``.  Each left singular
    vector has a nonnegative first nonzero component (the paired right vector
    is flipped with it).  The zero matrix returns zero singular values and the
    canonical basis.
    """
    s1, s2, u1x, u1y, u2x, u2y, v1x, v1y, v2x, v2y = _svd2_core(*_entries(M))
    # + 0.0 folds negative zeros so outputs are byte-stable
    return Svd2(
        s1,
        s2,
        np.array([u1x, u1y]) + 0.0,
        np.array([u2x, u2y]) + 0.0,
        np.array([v1x, v1y]) + 0.0,
        np.array([v2x, v2y]) + 0.0,
    )


def rank_indicator(M) -> float:
    """``sigma2 / max(1, sigma1)``; zero exactly when the columns are parallel."""
    return _indicator_core(*_entries(M))


def rank_eps(M, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``tol * max(1, sigma1)``."""
    _check_tol(tol)
    s1, s2 = _svd2_core(*_entries(M))[:2]
    return _rank_core(s1, s2, tol)


def nullspace_projection(M, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projection onto the nullspace of ``M.T`` (the complement of range(M)).

    Singular directions with ``sigma <= tol * max(1, sigma1)`` count as null.
    Full rank gives the exact zero matrix.
    """
    _check_tol(tol)
    p11, p12, p21, p22 = _projection_core(*_entries(M), tol)
    return np.array([[p11, p12], [p21, p22]]) + 0.0
