import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from uqtb.errors import DomainError
from uqtb.kernels import (
    U_RULE,
    FluxValue,
    SimilarityPoint,
    _integrand_terms,
    collided_plane,
    collided_plane_dx,
    collided_plane_matrix,
    line_collided,
    line_collided_cloud,
    line_source_flux,
    point_source_flux,
    uncollided_line,
    uncollided_plane,
)
from uqtb.quadrature import composite_gauss_legendre

from conftest import brute_plane_collided


# --- similarity variables -----------------------------------------------------


def test_similarity_point():
    p = SimilarityPoint(0.5, 2.0)
    assert p.eta == 0.25 and p.inside
    assert p.q == pytest.approx(1.25 / 0.75)
    outside = SimilarityPoint(-3.0, 2.0)
    assert not outside.inside and outside.q is None
    with pytest.raises(DomainError):
        SimilarityPoint(0.0, 0.0)


def test_flux_value_total():
    v = FluxValue(0.25, 0.5)
    assert v.total == 0.75


# --- uncollided -----------------------------------------------------------------


def test_uncollided_plane_values():
    assert uncollided_plane(0.5, 1.0) == pytest.approx(math.exp(-1) / 2, rel=1e-15)
    assert uncollided_plane(2.0, 1.0) == 0.0
    assert uncollided_plane(0.0, 5.0) == pytest.approx(math.exp(-5) / 10, rel=1e-15)


def test_uncollided_line_abel_relation():
    # integrating the line solution along one transverse axis gives the plane solution
    x, t = 0.3, 1.0
    h = math.sqrt(t * t - x * x)
    # y = h sin(s) removes the inverse-square-root edge singularity
    f = lambda s: uncollided_line(math.hypot(x, h * math.sin(s)), t) * h * math.cos(s)
    val, _ = integrate.quad(f, -0.5 * math.pi + 1e-9, 0.5 * math.pi - 1e-9, limit=200)
    assert val == pytest.approx(uncollided_plane(x, t), rel=1e-8)


def test_uncollided_line_mass():
    t = 1.5
    val, _ = integrate.quad(lambda r: 2 * math.pi * r * uncollided_line(r, t), 0, t, limit=200)
    assert val == pytest.approx(math.exp(-t), rel=1e-8)


# --- collided plane ---------------------------------------------------------------


def test_collided_trivial_cases():
    assert collided_plane(0.3, 1.0, 0.0) == 0.0
    assert collided_plane(1.2, 1.0, 0.7) == 0.0


@pytest.mark.parametrize("x,t,c", [(0.0, 1.0, 1.0), (0.5, 1.0, 1.0), (2.0, 5.0, 1.1), (-4.5, 5.0, 0.5), (0.1, 0.2, 1.4)])
def test_collided_matches_independent_quadrature(x, t, c):
    assert collided_plane(x, t, c) == pytest.approx(brute_plane_collided(x, t, c), rel=1e-9)


def test_collided_origin_value():
    assert collided_plane(0.0, 1.0, 1.0) == pytest.approx(0.49152566461006625, rel=1e-12)


def test_causality_random_points(rng):
    t = rng.uniform(0.1, 10, 100)
    x = np.sign(rng.uniform(-1, 1, 100)) * t * rng.uniform(1.0 + 1e-9, 3, 100)
    c = rng.uniform(0, 2, 100)
    for xi, ti, ci in zip(x, t, c):
        assert uncollided_plane(xi, ti) == 0.0
        assert collided_plane(xi, ti, ci) == 0.0
        assert point_source_flux(abs(xi), ti, ci).total == 0.0
        assert line_source_flux(abs(xi), ti, ci).total == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.999), st.floats(0.05, 20), st.floats(0.0, 2.0))
def test_slab_symmetry(frac, t, c):
    x = frac * t
    assert collided_plane(x, t, c) == pytest.approx(collided_plane(-x, t, c), rel=1e-13, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(0.1, 10), st.floats(0.01, 1.9), st.floats(0.01, 0.5))
def test_monotone_in_c(frac, t, c1, dc):
    x = frac * t
    assert collided_plane(x, t, c1) < collided_plane(x, t, c1 + dc)


def test_vectorised_over_c():
    cs = np.array([0.2, 0.9, 1.3])
    vec = collided_plane(0.4, 2.0, cs)
    np.testing.assert_allclose(vec, [collided_plane(0.4, 2.0, c) for c in cs], rtol=1e-12)


def test_wavefront_zero():
    assert abs(collided_plane(1.0 - 1e-8, 1.0, 1.0)) < 1e-6
    assert collided_plane(1.0 - 1e-13, 1.0, 1.0) == 0.0


def test_u_rule_refinement():
    fine = composite_gauss_legendre(np.linspace(0, math.pi, 5), 64)
    x = np.array([0.0, 0.3, 0.9, 2.5, 4.9])
    for t in (1.0, 5.0):
        xs = x[np.abs(x) < t]
        coarse = collided_plane_matrix(xs, t, [0.5, 1.0, 1.5], rule=U_RULE)
        ref = collided_plane_matrix(xs, t, [0.5, 1.0, 1.5], rule=fine)
        np.testing.assert_allclose(coarse, ref, rtol=1e-10, atol=1e-15)


def test_integrand_finite_near_u_pi():
    u = math.pi - np.array([1e-12, 1e-14, 0.0])
    zeta, xi, _, _ = _integrand_terms(np.array([0.0, 0.5, 0.99]), u)
    assert np.all(np.isfinite(zeta)) and np.all(np.isfinite(xi))


def test_adaptive_and_fixed_rule_agree():
    xs = np.linspace(-0.95, 0.95, 11)
    fixed = collided_plane_matrix(xs, 1.0, 1.0)[0]
    np.testing.assert_allclose(fixed, [collided_plane(x, 1.0, 1.0) for x in xs], rtol=1e-11)


def test_derivative_matches_finite_difference():
    h = 1e-5
    for x, t, c in [(0.5, 1.0, 1.0), (-2.0, 5.0, 0.8), (0.05, 1.0, 1.3)]:
        fd = (collided_plane(x + h, t, c, rtol=1e-13) - collided_plane(x - h, t, c, rtol=1e-13)) / (2 * h)
        assert collided_plane_dx(x, t, c) == pytest.approx(fd, rel=1e-7)


def test_collided_mass_conservation():
    for t, c in [(1.0, 1.0), (3.0, 0.5), (2.0, 1.25)]:
        val, _ = integrate.quad(lambda x: collided_plane(x, t, c), -t, t, limit=200, epsrel=1e-11)
        total = val + 2 * t * uncollided_plane(0.0, t)
        assert total == pytest.approx(math.exp(t * (c - 1)), rel=1e-9)


# --- point and line ------------------------------------------------------------


def test_point_source():
    assert point_source_flux(1.5, 1.0, 1.0).total == 0.0
    v = point_source_flux(0.5, 1.0, 0.0)
    assert v.uncollided == 0.0 and v.collided == 0.0
    h = 1e-6
    fd = (uncollided_plane(0.5 + h, 1.0) - uncollided_plane(0.5 - h, 1.0)) / (2 * h)
    assert fd == 0.0
    v = point_source_flux(0.5, 1.0, 1.0)
    assert v.collided == pytest.approx(0.16978851034388906, rel=1e-10)
    fd = (collided_plane(0.5 + 1e-5, 1.0, 1.0, rtol=1e-13) - collided_plane(0.5 - 1e-5, 1.0, 1.0, rtol=1e-13)) / 2e-5
    assert v.collided == pytest.approx(-fd / (2 * math.pi * 0.5), rel=1e-7)
    with pytest.raises(DomainError):
        point_source_flux(0.0, 1.0, 1.0)


def test_line_source_values():
    assert line_source_flux(1.01, 1.0, 0.7).total == 0.0
    v = line_source_flux(0.5, 1.0, 0.0)
    assert v.collided == 0.0
    assert v.uncollided == pytest.approx(math.exp(-1) / (2 * math.pi * math.sqrt(0.75)), rel=1e-14)
    with pytest.raises(DomainError):
        line_source_flux(-1.0, 1.0, 1.0)


def _line_axis_oracle(r, t, c):
    # phi_line(r) = 2 int_0^h phi_pt(sqrt(r^2 + z^2)) dz, h = sqrt(t^2 - r^2), by scipy quad
    h = math.sqrt(t * t - r * r)
    f = lambda z: point_source_flux(math.hypot(r, z), t, c).collided
    val, _ = integrate.quad(f, 0, h, epsrel=1e-11, limit=200)
    return 2 * val


@pytest.mark.parametrize("r,t", [(0.5, 1.0), (0.5, 5.0), (3.0, 5.0)])
def test_line_collided_axis_oracle(r, t):
    assert line_collided(r, t, 1.0) == pytest.approx(_line_axis_oracle(r, t, 1.0), rel=1e-8)


def test_line_symmetric_axis_integral():
    # the z-integrand is even, so integrating over [-h, h] is twice [0, h]
    r, t, c = 0.5, 5.0, 1.0
    h = math.sqrt(t * t - r * r)
    f = lambda z: point_source_flux(math.hypot(r, z), t, c).collided
    full, _ = integrate.quad(f, -h, h, epsrel=1e-11, limit=400, points=[0.0])
    assert full == pytest.approx(line_collided(r, t, c), rel=1e-8)


def test_line_cloud_matches_adaptive():
    for r, t in [(0.0, 1.0), (0.5, 1.0), (0.99, 1.0), (2.0, 5.0)]:
        cloud = line_collided_cloud(r, t)
        np.testing.assert_allclose(cloud([0.5, 1.0]), [line_collided(r, t, 0.5), line_collided(r, t, 1.0)], rtol=1e-10)


def test_line_abel_relation_collided():
    # int dy phi_line(sqrt(x^2 + y^2)) recovers the collided plane solution
    x, t, c = 0.4, 1.0, 1.0
    h = math.sqrt(t * t - x * x)
    f = lambda y: line_collided_cloud(math.hypot(x, y), t)(c)
    val, _ = integrate.quad(f, 0, h, epsrel=1e-10, limit=200)
    assert 2 * val == pytest.approx(collided_plane(x, t, c), rel=1e-7)


def test_line_mass():
    t, c = 1.0, 1.0
    val, _ = integrate.quad(lambda r: 2 * math.pi * r * line_collided_cloud(r, t)(c), 0, t, epsrel=1e-10, limit=200)
    assert val + math.exp(-t) == pytest.approx(math.exp(t * (c - 1)), rel=1e-7)
