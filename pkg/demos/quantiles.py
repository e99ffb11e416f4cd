"""
Percentiles by sampling the expansion
=====================================

Sampling the cheap polynomial instead of the transport solution.  Since the
flux increases with c, its p-quantile is the flux at c's own p-quantile,
which gives an exact reference to compare against.
"""

import numpy as np

from uqtb.pce import UncertainScatteringRatio, expand
from uqtb.sources import SourceConfig, split_response
from uqtb.stats import empirical_quantiles, quantile_oracle, sobol_sequence

unc = UncertainScatteringRatio(1.1, 0.275)
cfg = SourceConfig.plane()
exp = expand(cfg, 0.0, 5.0, unc, order=8)

offset, response = split_response(cfg, 0.0, 5.0)
grid = np.arange(1, 100) / 100
exact = quantile_oracle(lambda c: offset + response(c), unc, grid)

print("first Sobol points:", sobol_sequence(8))
for n in (10**2, 10**3, 10**4, 10**5, 10**6):
    est = empirical_quantiles(exp, n, grid).values
    print(f"n={n:>8d}  rmse={np.sqrt(np.mean((est - exact) ** 2)):.2e}")

# the median is the flux at the mean ratio
print("median", quantile_oracle(lambda c: offset + response(c), unc, 0.5), "nominal", offset + response(1.1))
