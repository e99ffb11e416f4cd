import math

import numpy as np
import pytest

from uqtb.errors import ConvergenceError
from uqtb.quadrature import (
    adaptive_gauss_legendre,
    clustered_gauss_legendre,
    composite_gauss_legendre,
    gauss_legendre,
    graded_gauss_legendre,
)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 40])
def test_gauss_legendre_exact_for_polynomials(n):
    rule = gauss_legendre(n, 0.25, 2.0)
    for k in range(2 * n):
        exact = (2.0 ** (k + 1) - 0.25 ** (k + 1)) / (k + 1)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("make", [gauss_legendre, clustered_gauss_legendre, graded_gauss_legendre])
def test_weights_sum_to_length(make):
    rule = make(24, 1.0, 3.5)
    assert rule.weights.sum() == pytest.approx(2.5, rel=1e-14)
    assert np.all((rule.nodes > 1.0) & (rule.nodes < 3.5))


def test_composite_matches_single_panels():
    rule = composite_gauss_legendre([0.0, 1.0, 3.0], 8)
    assert len(rule.nodes) == 16
    assert rule.integrate(np.exp) == pytest.approx(math.e**3 - 1, rel=1e-14)


def test_clustered_rule_handles_endpoint_log():
    # int_0^1 log(x) dx = -1; the end clustering makes this converge
    assert clustered_gauss_legendre(40, 0, 1).integrate(np.log) == pytest.approx(-1, rel=1e-5)


def test_adaptive_smooth_and_kinked():
    assert adaptive_gauss_legendre(np.sin, 0, math.pi) == pytest.approx(2.0, rel=1e-13)
    kinked = adaptive_gauss_legendre(lambda x: np.abs(x - 0.3), 0, 1, order=8, rtol=1e-12)
    assert kinked == pytest.approx(0.5 * (0.3**2 + 0.7**2), rel=1e-10)


def test_adaptive_vector_valued():
    f = lambda x: np.stack([np.cos(x), x**2])
    val = adaptive_gauss_legendre(f, 0, 1)
    np.testing.assert_allclose(val, [math.sin(1), 1 / 3], rtol=1e-13)


def test_adaptive_gives_up():
    with pytest.raises(ConvergenceError):
        adaptive_gauss_legendre(lambda x: 1 / np.sqrt(np.abs(x - 0.5)), 0, 1, order=4, rtol=1e-14, max_panels=8)
