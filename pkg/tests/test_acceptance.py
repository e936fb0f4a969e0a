"""Acceptance criteria, each checked at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see ``conftest.py``) and also as the tests run with ``-s``.
Run standalone with ``python tests/test_acceptance.py``.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from infharm2d import (
    ExampleA,
    ExampleB,
    GridSpec,
    LinearProfile,
    PhaseLabel,
    PlanarCurve,
    SeparatedMap,
    ZeroProfile,
    build_phase_map,
    check_prop2_affine,
    check_prop2_dichotomy,
    e_infinity_estimate,
    extract_interface,
    grid_residual,
    map_jet,
    numerical_jet,
    projection_jump,
)
from infharm2d.operator import grid_residual_separated, jet_error, straddles_breakpoint
from infharm2d.phase import oracle_labels
from geometry import distance_to_sigma

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}
CASES = {"a": ExampleA(), "b": ExampleB()}


def record(n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}  {title}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def square(n):
    return GridSpec.square(-3.0, 3.0, n)


@pytest.fixture(scope="module")
def maps():
    return {k: SeparatedMap.minus_f(p, (-5.0, 5.0)) for k, p in CASES.items()}


@pytest.fixture(scope="module")
def phase_maps(maps):
    return {(k, n): build_phase_map(maps[k], square(n)) for k in CASES for n in (121, 241, 481)}


def test_criterion_01_residual(maps):
    worst, slowest = 0.0, 0.0
    for prof in CASES.values():
        # the timed run includes curve construction and the analytic jets
        t0 = time.perf_counter()
        m = SeparatedMap.minus_f(prof, (-4.0, 4.0))
        r = grid_residual(m, square(241)).max_norm
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, r)
    record(1, "residual certification", worst <= 1e-10 and slowest <= 10.0,
           f"max |residual| = {worst:.3e} (<= 1e-10), slowest case {slowest:.2f} s (<= 10 s)")


def test_criterion_02_form_equivalence(maps):
    diff = 0.0
    for m in maps.values():
        idx = grid_residual(m, square(241)).value
        sep = grid_residual_separated(m, square(241))
        diff = max(diff, float(np.abs(idx - sep).max()))
    record(2, "form equivalence", diff <= 1e-10, f"max pointwise difference = {diff:.3e} (<= 1e-10)")


def test_criterion_03_phase_sets(phase_maps):
    mismatches, checked, parts = 0, 0, []
    ok_scaling = True
    for case in CASES:
        counts = []
        for n in (121, 241, 481):
            pm = phase_maps[case, n]
            g = pm.grid
            X, Y = g.mesh()
            far = distance_to_sigma(case, X, Y) > 2 * g.h
            mismatches += int(np.count_nonzero(far & (oracle_labels(case, g) != pm.labels)))
            checked += int(far.sum())
            counts.append(pm.counts()[PhaseLabel.INTERFACE_BAND])
        per_n = [c / n for c, n in zip(counts, (121, 241, 481))]
        ratios = [counts[1] / counts[0], counts[2] / counts[1]]
        ok_scaling &= all(1.8 <= r <= 2.2 for r in ratios) and max(per_n) / min(per_n) <= 1.1
        parts.append(f"{case.upper()} band {counts}")
    record(3, "phase-set reproduction", mismatches == 0 and ok_scaling,
           f"{mismatches} mismatches over {checked} nodes beyond 2h; " + ", ".join(parts) + " (linear in n)")


def _near(items, target, r):
    return sum(math.dist((p.x, p.y), target) <= r for p in items)


def test_criterion_04_junctions_corners(phase_maps):
    summary, ok = [], True
    for n in (241, 481):
        ga = extract_interface(phase_maps["a", n])
        gb = extract_interface(phase_maps["b", n])
        r = 2 * ga.h
        ok_a = (len(ga.junctions) == 1 and ga.junctions[0].degree == 3 and _near(ga.junctions, (0, 0), r) == 1)
        ok_b = (len(gb.junctions) == 2 and all(j.degree == 3 for j in gb.junctions)
                and _near(gb.junctions, (1, 1), r) == 1 and _near(gb.junctions, (-1, -1), r) == 1
                and len(gb.corners) == 2 and _near(gb.corners, (1, -1), r) == 1 and _near(gb.corners, (-1, 1), r) == 1)
        ok &= ok_a and ok_b
        summary.append(f"{n}^2: A {len(ga.junctions)}J/{len(ga.corners)}C, B {len(gb.junctions)}J/{len(gb.corners)}C")
    record(4, "junction and corner geometry", ok, "; ".join(summary) + " (expected A 1J/0C, B 2J/2C, within 2h)")


def test_criterion_05_affine_one_dim(maps, phase_maps):
    worst, samples = 0.0, 0
    for case, m in maps.items():
        pm = phase_maps[case, 241]
        pts = pm.points(pm.interior(PhaseLabel.ONE_DIM))
        rep = check_prop2_affine(m, pts, threshold=1e-12)
        # also through the full jet, mixed derivative included
        for x, y in pts[:: max(1, len(pts) // 500)]:
            j = map_jet(m, x, y)
            worst = max(worst, float(np.abs(np.concatenate((j.Hxx, j.Hxy, j.Hyy))).max()))
        worst = max(worst, rep.max_second_derivative)
        samples += rep.samples
    record(5, "affine on the 1-D phase", worst <= 1e-12 and samples > 0,
           f"max |D2u| = {worst:.3e} over {samples} interior samples (<= 1e-12)")


def test_criterion_06_dichotomy(maps, phase_maps):
    total, failed, branches = 0, 0, []
    for case, m in maps.items():
        rep = check_prop2_dichotomy(extract_interface(phase_maps[case, 241]), m, slope_tol=0.1, affine_tol=1e-8)
        total += len(rep.pieces)
        failed += rep.failures
        branches.append(f"{case.upper()}: " + ",".join(p.branch for p in rep.pieces))
    record(6, "dichotomy on smooth pieces", failed == 0 and total > 0,
           f"{failed}/{total} pieces fail both branches; " + "; ".join(branches))


def test_criterion_07_projection_jump():
    m = SeparatedMap.minus_f(LinearProfile(1.0), (-2.0, 2.0))
    grid = GridSpec.square(-0.78, 0.78, 121)  # inside (-pi/4, pi/4)^2
    normal = np.array([1.0, -1.0]) / math.sqrt(2.0)
    seq = {}
    for s in (-0.6, -0.2, 0.3, 0.7):
        seq[s] = [projection_jump(m, (s, s), normal, d) for d in (1e-2, 1e-3, 1e-4)]
    diag_dev = max(abs(v - 1.0) for vals in seq.values() for v in vals)
    pm = build_phase_map(m, grid)
    interior = pm.points(pm.interior(PhaseLabel.TWO_DIM))[::97]
    inner = max(projection_jump(m, p, n, 1e-3) for p in interior
                for n in (normal, np.array([1.0, 0.0]), np.array([0.6, 0.8])))
    record(7, "projection discontinuity", diag_dev <= 1e-2 and inner <= 1e-10,
           f"max |jump - 1| on the diagonal = {diag_dev:.3e} (<= 1e-2) for delta 1e-2..1e-4; "
           f"interior max = {inner:.3e} over {len(interior)} points (<= 1e-10)")


def test_criterion_08_fd_order(maps):
    lin = SeparatedMap.minus_f(LinearProfile(1.0), (-2.0, 2.0))
    probes = [(maps["a"], (2.0, 3.0)), (maps["a"], (1.3, -0.7)), (maps["b"], (2.0, 3.0)),
              (maps["b"], (-2.5, 1.7)), (lin, (0.1, -0.2)), (lin, (0.5, 0.4))]
    steps = (1e-2, 5e-3, 2.5e-3)
    orders = []
    for m, (x, y) in probes:
        assert not straddles_breakpoint(m, x, y, steps[0])
        exact = map_jet(m, x, y)
        err = [jet_error(numerical_jet(m, x, y, h), exact) for h in steps]
        orders += [math.log(err[k] / err[k + 1]) / math.log(2.0) for k in range(2)]
    lo, hi = min(orders), max(orders)
    record(8, "finite-difference order", 1.8 <= lo and hi <= 2.2,
           f"observed orders in [{lo:.4f}, {hi:.4f}] at {len(probes)} points (need [1.8, 2.2])")


def test_criterion_09_negative_control():
    frozen = json.loads((FIXTURES / "negative_control.json").read_text())
    g = frozen["grid"]
    m = SeparatedMap.plus_g(ExampleA(), support=(-1.0, 3.0))
    got = grid_residual(m, GridSpec.square(g["lo"], g["hi"], g["n"])).max_norm
    agree = abs(got - frozen["floor"]) <= 1e-6 * frozen["floor"]
    record(9, "negative control", got >= 1e-2 and agree,
           f"grid max = {got:.6f} (>= 1e-2), brute-force oracle {frozen['floor']:.6f}")


def test_criterion_10_unit_speed_e_infinity():
    profiles = [ZeroProfile(), ExampleA(), ExampleB(), LinearProfile(1.0), LinearProfile(-0.4)]
    speed = 0.0
    for p in profiles:
        ts = np.linspace(-10.0, 10.0, 10_000)
        fp, _ = PlanarCurve(p, (-10.0, 10.0)).derivatives(ts)
        speed = max(speed, float(np.abs(np.linalg.norm(fp, axis=1) - 1.0).max()))
    e_dev = 0.0
    for p in profiles:
        m = SeparatedMap.minus_f(p, (-4.0, 4.0))
        for g in (square(241), GridSpec(-1.0, 2.5, -3.0, 0.5, 57, 91)):
            e_dev = max(e_dev, abs(e_infinity_estimate(m, g) - math.sqrt(2.0)))
    record(10, "unit speed and E-infinity", speed <= 1e-14 and e_dev <= 1e-14,
           f"max ||f'| - 1| = {speed:.3e}, max |E - sqrt2| = {e_dev:.3e} (both <= 1e-14)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
