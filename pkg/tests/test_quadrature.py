import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimless_uncertainty.quadrature import QuadratureError, integrate_interval, tanh_sinh


@given(k=st.integers(0, 12))
def test_monomials(k):
    assert tanh_sinh(lambda x, xc: x**k) == pytest.approx(1.0 / (k + 1), rel=1e-13)


def test_inverse_square_root_end_points():
    # integral of 1/sqrt(x (1 - x)) over [0, 1] is pi
    assert tanh_sinh(lambda x, xc: 1.0 / np.sqrt(x * xc)) == pytest.approx(math.pi, rel=1e-13)


@settings(max_examples=20)
@given(b=st.integers(1, 10))
def test_complement_keeps_turning_point_accuracy(b):
    # integral of (1 - x**b)**(-1/2) = B(1/b, 1/2) / b
    def f(x, xc):
        near = xc < 0.5
        gap = np.where(near, -np.expm1(b * np.log1p(-np.where(near, xc, 0.0))), 1.0 - x**b)
        return 1.0 / np.sqrt(gap)

    exact = math.gamma(1 / b) * math.gamma(0.5) / math.gamma(1 / b + 0.5) / b
    assert tanh_sinh(f) == pytest.approx(exact, rel=1e-12)


def test_interval_mapping():
    assert integrate_interval(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-13)


def test_non_convergence_raises():
    with pytest.raises(QuadratureError):
        tanh_sinh(lambda x, xc: np.cos(400.0 * x), max_levels=3)
