import math

import numpy as np
import pytest

from infharm2d import GridSpec, LinearProfile, SeparatedMap, build_phase_map, extract_interface
from infharm2d.interface import detect_corners, simplify_collinear, turning_angles
from geometry import distance_to_sigma


def staircase_l(n=10):
    """Grid path along the x-axis then up the y-axis."""
    return np.array([(i, 0) for i in range(n)] + [(n - 1, j) for j in range(1, n)], dtype=float)


def near(points, target, radius):
    return [p for p in points if math.dist((p.x, p.y), target) <= radius]


@pytest.fixture(scope="module")
def graphs(request):
    from infharm2d import ExampleA, ExampleB

    out = {}
    for key, prof in (("a", ExampleA()), ("b", ExampleB())):
        m = SeparatedMap.minus_f(prof, (-5, 5))
        for n in (241, 481):
            g = GridSpec.square(-3, 3, n)
            out[key, n] = (extract_interface(build_phase_map(m, g)), m)
    return out


def test_turning_angles_straight_and_right_angle():
    ang = turning_angles(staircase_l())
    assert ang[9] == pytest.approx(90.0)
    assert int(np.argmax(ang)) == 9 and ang[0] == 0.0 and ang[-1] == 0.0
    assert np.all(turning_angles(np.c_[np.arange(8.0), np.arange(8.0)]) < 1e-9)


def test_detect_single_corner():
    assert detect_corners(staircase_l()) == [9]


def test_digitised_line_has_no_corner():
    # m-connected raster of slope 1/3: steps (1,0), (1,0), (1,1) repeated
    pts = [(0.0, 0.0)]
    for k in range(30):
        x, y = pts[-1]
        pts.append((x + 1, y + (k % 3 == 2)))
    assert detect_corners(np.array(pts)) == []


def test_closed_square_has_four_corners():
    side = np.arange(0, 6.0)
    sq = np.concatenate([np.c_[side, 0 * side], np.c_[0 * side + 6, side], np.c_[6 - side, 0 * side + 6], np.c_[0 * side, 6 - side]])
    assert len(detect_corners(sq, closed=True)) == 4


def test_simplify_collinear():
    s = simplify_collinear(staircase_l(), 1.0, keep=[9])
    np.testing.assert_array_equal(s, [[0, 0], [9, 0], [9, 9]])


def test_case_a_junction(graphs):
    for n in (241, 481):
        ifg, _ = graphs["a", n]
        assert len(ifg.junctions) == 1
        j = ifg.junctions[0]
        assert j.degree == 3
        assert math.hypot(j.x, j.y) <= 2 * ifg.h
        assert ifg.corners == []


def test_case_a_branches(graphs):
    ifg, _ = graphs["a", 241]
    assert len(ifg.polylines) == 3
    ends = sorted(tuple(np.round(pl.vertices[-1] if np.hypot(*pl.vertices[0]) < 0.1 else pl.vertices[0], 6))
                  for pl in ifg.polylines)
    # branches run from the junction to the grid edge along -x, -y and the diagonal ray
    assert ends[0][0] == pytest.approx(-3.0) and abs(ends[0][1]) <= 2 * ifg.h
    assert abs(ends[1][0]) <= 2 * ifg.h and ends[1][1] == pytest.approx(-3.0)
    assert ends[2][0] == pytest.approx(ends[2][1], abs=2 * ifg.h) and ends[2][0] >= 3 - 2 * ifg.h


def test_case_b_junctions_and_corners(graphs):
    for n in (241, 481):
        ifg, _ = graphs["b", n]
        r = 2 * ifg.h
        assert len(ifg.junctions) == 2
        assert all(j.degree == 3 for j in ifg.junctions)
        assert len(near(ifg.junctions, (1, 1), r)) == 1 and len(near(ifg.junctions, (-1, -1), r)) == 1
        assert len(ifg.corners) == 2
        assert len(near(ifg.corners, (1, -1), r)) == 1 and len(near(ifg.corners, (-1, 1), r)) == 1
        assert all(c.angle_deg == pytest.approx(90.0, abs=5.0) for c in ifg.corners)


@pytest.mark.parametrize("case", ["a", "b"])
def test_counts_stable_under_refinement(graphs, case):
    coarse, _ = graphs[case, 241]
    fine, _ = graphs[case, 481]
    assert len(coarse.junctions) == len(fine.junctions)
    assert len(coarse.corners) == len(fine.corners)
    assert len(coarse.polylines) == len(fine.polylines)


@pytest.mark.parametrize("case", ["a", "b"])
def test_vertices_near_sigma(graphs, case):
    ifg, _ = graphs[case, 481]
    assert distance_to_sigma(case, ifg.nodes[:, 0], ifg.nodes[:, 1]).max() <= 2 * ifg.h


def test_linear_map_single_line():
    m = SeparatedMap.minus_f(LinearProfile(1.0), (-2, 2))
    ifg = extract_interface(build_phase_map(m, GridSpec.square(-0.78, 0.78, 121)))
    assert len(ifg.polylines) == 1 and ifg.junctions == [] and ifg.corners == []
    v = ifg.polylines[0].simplified
    assert len(v) == 2
    np.testing.assert_allclose(v[:, 0], v[:, 1], atol=1e-15)


def test_zero_profile_empty_graph(map_zero):
    ifg = extract_interface(build_phase_map(map_zero, GridSpec.square(-1, 1, 21)))
    assert ifg.empty and ifg.polylines == [] and ifg.junctions == []
