"""
Propagating an uncertain scattering ratio
=========================================

Let c = cbar + omega1 * theta with theta uniform on [-1, 1].  Projecting the
collided flux onto Legendre polynomials in theta gives its mean and variance
straight from the coefficients.
"""

import numpy as np

from uqtb.pce import UncertainScatteringRatio, expand
from uqtb.sources import SourceConfig
from uqtb.stats import analytic_expectation_plane, direct_moments
from uqtb.kernels import collided_plane

unc = UncertainScatteringRatio(1.0, 0.5)
exp = expand(SourceConfig.plane(), 0.0, 5.0, unc, order=8)
print("coefficients:", np.array2string(exp.coeffs, precision=3))
print(f"mean {exp.expectation():.10f}   variance {exp.variance():.10f}")

# the mean of the collided part has a closed form in one contour integral
print(f"a0 {exp.coeffs[0]:.12f}  closed form {analytic_expectation_plane(0.0, 5.0, unc):.12f}")

# brute-force theta quadrature of the flux and its square agrees
mean, var = direct_moments(lambda th: collided_plane(0.0, 5.0, unc.realize(th)))
print(f"quadrature variance {var:.10f}")

# the coefficients decay fast, so a handful of terms is enough
for n in range(1, 9):
    print(n, f"{abs(exp.truncate(n).variance() - var):.2e}")

# expansions serialise to a flat record
print(exp.truncate(3).to_json())
