import math

import numpy as np
import pytest
from scipy.integrate import quad

from uqtb.errors import DomainError, MonotonicityError
from uqtb.kernels import collided_plane, uncollided_plane
from uqtb.pce import ChaosExpansion, UncertainScatteringRatio, expand
from uqtb.sources import SourceConfig
from uqtb.stats import (
    DEFAULT_PERCENTILES,
    QuantileTable,
    _h,
    analytic_expectation_plane,
    direct_moments,
    empirical_quantiles,
    quantile_oracle,
    sobol_sequence,
)


def test_sobol_first_points():
    np.testing.assert_array_equal(sobol_sequence(1), [0.0])
    np.testing.assert_array_equal(sobol_sequence(3), [0.0, -0.5, 0.5])
    pts = sobol_sequence(7)
    np.testing.assert_array_equal(np.sort(pts), np.linspace(-0.75, 0.75, 7))


def test_sobol_same_set_as_scipy():
    from scipy.stats import qmc

    ours = np.sort(sobol_sequence(2**10 - 1))
    ref = np.sort(2 * qmc.Sobol(1, scramble=False).random(2**10)[1:, 0] - 1)
    np.testing.assert_array_equal(ours, ref)


def test_sobol_equidistributed():
    assert abs(sobol_sequence(2**20).mean()) < 1e-5


def test_quantile_table_validation():
    with pytest.raises(ValueError):
        QuantileTable([0.5, 0.2], [1, 2], 100)
    with pytest.raises(ValueError):
        QuantileTable([0.0, 0.5], [1, 2], 100)
    csv = QuantileTable([0.5], [2.0], 100).to_csv()
    assert csv.splitlines()[0] == "p,value,n_samples"


def test_constant_expansion_quantiles():
    table = empirical_quantiles(ChaosExpansion([0.3, 0, 0], 0.1), 1000)
    np.testing.assert_allclose(table.values, 0.4, rtol=1e-15)
    assert table.n_samples == 1000 and table.estimator == "linear"


def test_identity_median():
    n = 10_001
    table = empirical_quantiles(ChaosExpansion([0.0, 1.0]), n, [0.25, 0.5, 0.75])
    assert abs(table.values[1]) <= 2 / n
    np.testing.assert_allclose(table.values, [-0.5, 0.0, 0.5], atol=4 / n)


def test_quantiles_monotone_and_deterministic():
    exp = expand(SourceConfig.plane(), 0.0, 5.0, UncertainScatteringRatio(1.1, 0.275), order=8)
    a = empirical_quantiles(exp, 10_000)
    b = empirical_quantiles(exp, 10_000)
    assert np.all(np.diff(a.values) >= 0)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.to_csv() == b.to_csv()
    with pytest.raises(ValueError):
        empirical_quantiles(exp, 10)


def test_oracle_trivial_percentiles():
    unc = UncertainScatteringRatio(1.0, 0.4)
    phi = lambda c: np.asarray(c) ** 3
    assert quantile_oracle(phi, unc, 0.5) == pytest.approx(1.0)
    assert quantile_oracle(phi, unc, 0.25) == pytest.approx(0.8**3)
    assert quantile_oracle(phi, unc, 1 - 1e-12) == pytest.approx(1.4**3)


def test_oracle_median_is_nominal():
    unc = UncertainScatteringRatio(1.0, 0.1)
    phi = lambda c: collided_plane(0.5, 1.0, c)
    assert quantile_oracle(phi, unc, 0.5) == collided_plane(0.5, 1.0, 1.0)


def test_oracle_refuses_non_monotone():
    with pytest.raises(MonotonicityError):
        quantile_oracle(lambda c: (np.asarray(c) - 1.0) ** 2, UncertainScatteringRatio(1.0, 0.5), 0.5)


def test_h_series_matches_direct_form():
    z = np.array([0.49, 0.3 + 0.2j, -0.4j, 0.51, 2.0 - 1j])
    direct = (z * np.exp(z) - np.expm1(z)) / z**2
    np.testing.assert_allclose(_h(z), direct, rtol=1e-12)
    assert _h(np.array([0.0]))[0] == pytest.approx(0.5)


def test_analytic_expectation_cases():
    unc = UncertainScatteringRatio(1.0, 0.5)
    assert analytic_expectation_plane(1.0, 1.0, unc) == 0.0
    assert analytic_expectation_plane(-3.0, 2.0, unc) == 0.0
    with pytest.raises(DomainError):
        analytic_expectation_plane(0.0, 1.0, UncertainScatteringRatio(1.0, 0.0))
    tiny = analytic_expectation_plane(0.5, 1.0, UncertainScatteringRatio(1.0, 1e-6))
    assert tiny == pytest.approx(collided_plane(0.5, 1.0, 1.0), rel=1e-5)


@pytest.mark.parametrize("x,t", [(0.0, 5.0), (0.5, 1.0), (-2.5, 3.0)])
def test_analytic_expectation_matches_quadrature(x, t):
    unc = UncertainScatteringRatio(1.0, 0.5)
    ref = 0.5 * quad(lambda th: collided_plane(x, t, 1.0 + 0.5 * th), -1, 1, epsrel=1e-13)[0]
    assert analytic_expectation_plane(x, t, unc) == pytest.approx(ref, abs=1e-8, rel=1e-11)


def test_direct_moments_trivial():
    mean, var = direct_moments(lambda th: np.full_like(th, 2.5))
    assert mean == pytest.approx(2.5) and var == pytest.approx(0.0, abs=1e-14)
    mean, var = direct_moments(lambda th: th)
    assert mean == pytest.approx(0.0, abs=1e-15) and var == pytest.approx(1 / 3, rel=1e-14)


def test_direct_moments_match_expansion():
    unc = UncertainScatteringRatio(1.0, 0.1)
    exp = expand(SourceConfig.plane(), 0.5, 1.0, unc, order=6)
    assert not exp.aliased
    mean, var = direct_moments(lambda th: collided_plane(0.5, 1.0, unc.realize(th)))
    assert exp.expectation() == pytest.approx(mean + uncollided_plane(0.5, 1.0), abs=1e-8)
    assert exp.variance() == pytest.approx(var, abs=1e-8)


def test_default_percentile_grid():
    assert len(DEFAULT_PERCENTILES) == 99
    assert DEFAULT_PERCENTILES[0] == 0.01 and DEFAULT_PERCENTILES[-1] == 0.99
