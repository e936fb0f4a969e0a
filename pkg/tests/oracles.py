"""Independent reference computations used as test oracles.

Nothing here imports the closed-form SVD, the kernels or the package
quadrature: projections come from LAPACK (numpy.linalg.svd), curve
positions from scipy's QUADPACK, and the operator from a literal loop over
the index formula.
"""

import math
import warnings

import numpy as np
from scipy.integrate import quad


def projection_lapack(M, tol=1e-8):
    U, s, _ = np.linalg.svd(np.asarray(M, dtype=float))
    thr = tol * max(1.0, s[0])
    P = np.eye(2)
    for i in range(2):
        if s[i] > thr:
            P -= np.outer(U[:, i], U[:, i])
    return P


def laplacian_loops(Du, Hxx, Hxy, Hyy, tol=1e-8):
    """sum_ij D_i u_a D_j u_b D2_ij u_b + |Du|^2 P_ab D2_ii u_b, term by term."""
    H = {(0, 0): Hxx, (0, 1): Hxy, (1, 0): Hxy, (1, 1): Hyy}
    P = projection_lapack(Du, tol)
    sq = sum(Du[a, i] ** 2 for a in range(2) for i in range(2))
    tan = np.zeros(2)
    nor = np.zeros(2)
    for a in range(2):
        for b in range(2):
            for i in range(2):
                for j in range(2):
                    tan[a] += Du[a, i] * Du[b, j] * H[i, j][b]
                nor[a] += sq * P[a, b] * H[i, i][b]
    return tan, nor


def curve_quadpack(kfun, t):
    """f(t) = int_0^t (cos K, sin K) via scipy.integrate.quad; kfun returns K only."""
    with warnings.catch_warnings():
        # asking for 1e-14 trips QUADPACK's roundoff detector; the value is still good to ~1e-15
        warnings.simplefilter("ignore")
        cx = quad(lambda s: math.cos(kfun(s)), 0.0, t, epsabs=1e-14, epsrel=1e-14, limit=200)[0]
        cy = quad(lambda s: math.sin(kfun(s)), 0.0, t, epsabs=1e-14, epsrel=1e-14, limit=200)[0]
    return np.array([cx, cy])


def k_example_a(t):
    return 0.0 if t <= 0 else 1.0 - 1.0 / (t * t + 1.0)


def k_example_b(t):
    if t > 1:
        return 1.0 - 1.0 / ((t - 1) ** 2 + 1.0)
    if t < -1:
        return 1.0 / ((t + 1) ** 2 + 1.0) - 1.0
    return 0.0
