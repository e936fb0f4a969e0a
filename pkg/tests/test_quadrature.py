import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from infharm2d.quadrature import QuadratureError, gk15, integrate


@pytest.mark.parametrize("p", range(0, 23, 2))
def test_gk15_exact_on_even_polynomials(p):
    val, _ = gk15(lambda t: t**p, -1.0, 1.0)
    assert val == pytest.approx(2.0 / (p + 1), rel=1e-14)


def test_gk15_error_estimate_vanishes_on_low_degree():
    _, err = gk15(lambda t: 3 * t**5 - t**2 + 1, 0.0, 2.0)
    assert err < 1e-13


@settings(max_examples=50, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.1, 3.0))
def test_integrate_matches_quadpack(a, b, w):
    warnings.simplefilter("ignore")
    f = lambda t: np.cos(w * t * t)
    ref = quad(lambda t: math.cos(w * t * t), a, b, epsabs=1e-14, epsrel=1e-14, limit=500)[0]
    assert integrate(f, a, b, tol=1e-12) == pytest.approx(ref, abs=1e-11)


def test_integrate_reversed_and_empty():
    assert integrate(np.exp, 1.0, 0.0) == pytest.approx(-(math.e - 1), abs=1e-14)
    assert integrate(np.exp, 0.5, 0.5) == 0.0


def test_breakpoints_handle_kinks():
    f = lambda t: np.abs(t - 0.3)
    assert integrate(f, -1.0, 1.0, breakpoints=(0.3,)) == pytest.approx((1.3**2 + 0.7**2) / 2, abs=1e-14)


def test_failure_reports_achieved_tolerance():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: np.sin(1.0 / t), 1e-9, 1.0, tol=1e-15, max_panels=20)
    assert info.value.achieved > 1e-15
    assert np.isfinite(info.value.achieved)
