"""Optional numba acceleration.

Grid kernels have a numba implementation and a vectorised numpy one. The
numba path is used when numba imports cleanly and ``INFHARM2D_DISABLE_JIT``
is unset (or ``0``). ``INFHARM2D_THREADS`` caps the numba thread pool
(``0`` or unset means numba's default).
"""

from __future__ import annotations

import os

try:
    import numba
    from numba import njit, prange
    from numba.extending import register_jitable

    NUMBA_OK = True
    # skip the TBB probe, which warns on older TBB installs
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    NUMBA_OK = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    def register_jitable(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


def jit_enabled() -> bool:
    """True when grid kernels should dispatch to the numba implementations."""
    return NUMBA_OK and not _env_flag("INFHARM2D_DISABLE_JIT")


def configure_threads() -> int:
    """Apply ``INFHARM2D_THREADS`` to numba; returns the thread count in effect."""
    if not NUMBA_OK:
        return 1
    raw = os.environ.get("INFHARM2D_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    cap = numba.config.NUMBA_NUM_THREADS
    if n > 0:
        numba.set_num_threads(min(n, cap))
    return numba.get_num_threads()


__all__ = ["NUMBA_OK", "njit", "prange", "register_jitable", "jit_enabled", "configure_threads"]
