import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unifint.errors import QuadratureError
from unifint.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, gk21, integrate


def test_rule_weights_sum_to_two():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert len(NODES) == 21


@pytest.mark.parametrize("deg", [0, 1, 5, 19, 31])
def test_kronrod_exact_for_polynomials(deg):
    val, err, _ = gk21(lambda x: x**deg, 0.0, 1.0)
    assert val == pytest.approx(1.0 / (deg + 1), rel=1e-14)


def test_gk21_error_estimate_is_small_for_smooth():
    val, err, resabs = gk21(np.exp, 0.0, 1.0)
    assert abs(val - (math.e - 1)) < 1e-14
    assert err < 1e-12
    assert resabs == pytest.approx(math.e - 1)


def test_integrate_endpoint_singularity():
    res = integrate(lambda x: x**-0.5, [0.0, 1.0], rtol=1e-12)
    assert res.value == pytest.approx(2.0, rel=1e-11)
    assert res.panels > 1


def test_integrate_vector_valued():
    ks = np.array([1.0, 2.0, 3.0])
    res = integrate(lambda x: np.cos(ks[:, None] * x[None, :]), [0.0, math.pi / 2], rtol=1e-12, atol=1e-13)
    assert np.allclose(res.value, np.sin(ks * math.pi / 2) / ks, rtol=0, atol=1e-13)


def test_integrate_complex_integrand():
    res = integrate(lambda t: np.exp(1j * t), [0.0, math.pi], rtol=1e-12)
    assert res.value == pytest.approx(2j, abs=1e-13)


def test_integrate_panel_cap_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sin(1 / x), [1e-8, 1.0], rtol=1e-13, max_panels=20)


@given(st.floats(0.1, 20.0), st.floats(-3.0, 3.0))
@settings(max_examples=50, deadline=None)
def test_integrate_gaussian_bump(width, centre):
    res = integrate(lambda x: np.exp(-((x - centre) ** 2) / width), [-40.0, 0.0, 40.0], rtol=1e-11)
    assert res.value == pytest.approx(math.sqrt(math.pi * width), rel=1e-10)
