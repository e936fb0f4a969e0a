"""Per-node grid kernels: rank indicator, nullspace projection, infinity-Laplacian.

Inputs are flat batches: ``Du`` of shape ``(n, 2, 2)`` and second-derivative
vectors of shape ``(n, 2)``.  Every kernel has a numba implementation
(``*_numba``, a ``prange`` loop over the scalar cores in :mod:`linalg2`) and a
vectorised numpy one (``*_numpy``); the unsuffixed names dispatch on
:func:`infharm2d._accel.jit_enabled`.
"""

from __future__ import annotations

import numpy as np

from ._accel import jit_enabled, njit, prange, register_jitable
from .linalg2 import _indicator_core, _projection_core


@register_jitable
def _laplacian_core(a, b, c, d, xx0, xx1, xy0, xy1, yy0, yy1, tol):
    """Index form at one node; returns (t0, t1, n0, n1)."""
    # s[i][j] = Du[:, j] . D2_ij u
    s11 = a * xx0 + c * xx1
    s12 = b * xy0 + d * xy1
    s21 = a * xy0 + c * xy1
    s22 = b * yy0 + d * yy1
    t0 = a * (s11 + s12) + b * (s21 + s22)
    t1 = c * (s11 + s12) + d * (s21 + s22)
    p11, p12, p21, p22 = _projection_core(a, b, c, d, tol)
    sq = a * a + b * b + c * c + d * d
    l0 = xx0 + yy0
    l1 = xx1 + yy1
    n0 = sq * (p11 * l0 + p12 * l1)
    n1 = sq * (p21 * l0 + p22 * l1)
    return t0, t1, n0, n1


# numpy path ------------------------------------------------------------------

def _svd_numpy(Du):
    a, b = Du[:, 0, 0], Du[:, 0, 1]
    c, d = Du[:, 1, 0], Du[:, 1, 1]
    e, f = 0.5 * (a + d), 0.5 * (a - d)
    g, h = 0.5 * (c + b), 0.5 * (c - b)
    s1 = np.hypot(e, h) + np.hypot(f, g)
    phi = 0.5 * (np.arctan2(h, e) + np.arctan2(g, f))
    with np.errstate(invalid="ignore", divide="ignore"):
        s2 = np.where(s1 > 0.0, np.minimum(np.abs(a * d - b * c) / s1, s1), 0.0)
    return s1, s2, phi


def indicator_numpy(Du: np.ndarray) -> np.ndarray:
    s1, s2, _ = _svd_numpy(Du)
    return s2 / np.maximum(1.0, s1)


def projection_numpy(Du: np.ndarray, tol: float) -> np.ndarray:
    s1, s2, phi = _svd_numpy(Du)
    thr = tol * np.maximum(1.0, s1)
    rank = (s1 > thr).astype(np.int64) + (s2 > thr)
    # u2 = (-sin phi, cos phi); its sign cancels in the outer product
    u2 = np.stack((-np.sin(phi), np.cos(phi)), axis=-1)
    P = u2[:, :, None] * u2[:, None, :]
    P[rank == 2] = 0.0
    P[rank == 0] = np.eye(2)
    return P + 0.0


def laplacian_numpy(Du, Hxx, Hxy, Hyy, tol):
    n = Du.shape[0]
    H = np.empty((n, 2, 2, 2))
    H[:, 0, 0], H[:, 0, 1], H[:, 1, 0], H[:, 1, 1] = Hxx, Hxy, Hxy, Hyy
    tangential = np.einsum("nai,nbj,nijb->na", Du, Du, H)
    P = projection_numpy(Du, tol)
    sq = np.einsum("nai,nai->n", Du, Du)
    normal = sq[:, None] * np.einsum("nab,nb->na", P, Hxx + Hyy)
    return tangential + normal, tangential, normal


# numba path ------------------------------------------------------------------

@njit(parallel=True, cache=True)
def indicator_numba(Du):
    n = Du.shape[0]
    out = np.empty(n)
    for k in prange(n):
        out[k] = _indicator_core(Du[k, 0, 0], Du[k, 0, 1], Du[k, 1, 0], Du[k, 1, 1])
    return out


@njit(parallel=True, cache=True)
def projection_numba(Du, tol):
    n = Du.shape[0]
    out = np.empty((n, 2, 2))
    for k in prange(n):
        p11, p12, p21, p22 = _projection_core(Du[k, 0, 0], Du[k, 0, 1], Du[k, 1, 0], Du[k, 1, 1], tol)
        out[k, 0, 0] = p11 + 0.0
        out[k, 0, 1] = p12 + 0.0
        out[k, 1, 0] = p21 + 0.0
        out[k, 1, 1] = p22 + 0.0
    return out


@njit(parallel=True, cache=True)
def laplacian_numba(Du, Hxx, Hxy, Hyy, tol):
    n = Du.shape[0]
    tan = np.empty((n, 2))
    nor = np.empty((n, 2))
    val = np.empty((n, 2))
    for k in prange(n):
        t0, t1, n0, n1 = _laplacian_core(
            Du[k, 0, 0], Du[k, 0, 1], Du[k, 1, 0], Du[k, 1, 1],
            Hxx[k, 0], Hxx[k, 1], Hxy[k, 0], Hxy[k, 1], Hyy[k, 0], Hyy[k, 1], tol,
        )
        tan[k, 0], tan[k, 1] = t0, t1
        nor[k, 0], nor[k, 1] = n0, n1
        val[k, 0], val[k, 1] = t0 + n0, t1 + n1
    return val, tan, nor


# dispatch --------------------------------------------------------------------

def _flat(a, tail):
    a = np.ascontiguousarray(a, dtype=np.float64)
    return a.reshape((-1,) + tail), a.shape[: a.ndim - len(tail)]


def indicator(Du: np.ndarray) -> np.ndarray:
    """``sigma2 / max(1, sigma1)`` for every matrix in ``Du[..., 2, 2]``."""
    flat, lead = _flat(Du, (2, 2))
    out = indicator_numba(flat) if jit_enabled() else indicator_numpy(flat)
    return out.reshape(lead)


def projection(Du: np.ndarray, tol: float) -> np.ndarray:
    flat, lead = _flat(Du, (2, 2))
    out = projection_numba(flat, tol) if jit_enabled() else projection_numpy(flat, tol)
    return out.reshape(lead + (2, 2))


def laplacian(Du, Hxx, Hxy, Hyy, tol: float):
    """Infinity-Laplacian at every node: ``(value, tangential, normal)``, each ``[..., 2]``."""
    fDu, lead = _flat(Du, (2, 2))
    args = [_flat(h, (2,))[0] for h in (Hxx, Hxy, Hyy)]
    impl = laplacian_numba if jit_enabled() else laplacian_numpy
    return tuple(o.reshape(lead + (2,)) for o in impl(fDu, *args, tol))
