"""Numba vs numpy grid kernels on a full-resolution phase/residual sweep.

    python benchmarks/bench_kernels.py [--n 481] [--repeat 5]

The numba timings exclude the first (compiling) call, which is reported
separately.
"""

import argparse
import os
import time

import numpy as np

from infharm2d import ExampleB, GridSpec, SeparatedMap, kernels
from infharm2d._accel import NUMBA_OK, configure_threads


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=481)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    grid = GridSpec.square(-3.0, 3.0, args.n)
    jets = SeparatedMap.minus_f(ExampleB(), (-4.0, 4.0)).grid_jets(grid.xs, grid.ys, values=False)
    Du = np.ascontiguousarray(jets.Du.reshape(-1, 2, 2))
    H = [np.ascontiguousarray(h.reshape(-1, 2)) for h in (jets.Hxx, jets.Hxy, jets.Hyy)]
    tol = 1e-8

    cases = {
        "indicator": (lambda: kernels.indicator_numpy(Du), lambda: kernels.indicator_numba(Du)),
        "projection": (lambda: kernels.projection_numpy(Du, tol), lambda: kernels.projection_numba(Du, tol)),
        "laplacian": (lambda: kernels.laplacian_numpy(Du, *H, tol), lambda: kernels.laplacian_numba(Du, *H, tol)),
    }
    print(f"{len(Du)} nodes ({args.n}x{args.n}), best of {args.repeat}")
    if not NUMBA_OK:
        print("numba not installed: numpy timings only")
    else:
        print(f"numba threads: {configure_threads()} (INFHARM2D_THREADS={os.environ.get('INFHARM2D_THREADS', 'unset')})")
    print(f"{'kernel':<12}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'first call [s]':>16}")
    for name, (np_fn, nb_fn) in cases.items():
        t_np = best_of(np_fn, args.repeat)
        if not NUMBA_OK:
            print(f"{name:<12}{t_np * 1e3:>12.2f}")
            continue
        t0 = time.perf_counter()
        nb_fn()
        first = time.perf_counter() - t0
        t_nb = best_of(nb_fn, args.repeat)
        print(f"{name:<12}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}{first:>16.3f}")
        a, b = np_fn(), nb_fn()
        diff = max(float(np.abs(x - y).max()) for x, y in zip(*(
            (v if isinstance(v, tuple) else (v,)) for v in (a, b))))
        assert diff < 1e-12, f"{name}: backends differ by {diff}"


if __name__ == "__main__":
    main()
