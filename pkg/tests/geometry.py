"""Closed-form Euclidean distance to the analytic interfaces, independent of the package."""

import numpy as np

# each interface as a union of segments; rays are cut well outside any test grid
SEGMENTS = {
    "a": [((0, 0), (0, -50)), ((0, 0), (-50, 0)), ((0, 0), (50, 50))],
    "b": [((1, 1), (1, -1)), ((1, -1), (-1, -1)), ((-1, -1), (-1, 1)), ((-1, 1), (1, 1)),
          ((1, 1), (50, 50)), ((-1, -1), (-50, -50))],
    "diag": [((-50, -50), (50, 50))],
}


def segment_distance(X, Y, a, b):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    t = np.clip(((X - a[0]) * d[0] + (Y - a[1]) * d[1]) / (d @ d), 0.0, 1.0)
    return np.hypot(X - a[0] - t * d[0], Y - a[1] - t * d[1])


def distance_to_sigma(case, X, Y):
    return np.min([segment_distance(X, Y, a, b) for a, b in SEGMENTS[case]], axis=0)
