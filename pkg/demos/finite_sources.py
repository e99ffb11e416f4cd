"""
Square and Gaussian sources
===========================

A source that stays on for t0 mean free times is a convolution of the plane
pulse over space and emission time.  The uncollided part is cheap; the
collided part is built once per point and can then be evaluated at many
scattering ratios.
"""

import numpy as np

from uqtb.sources import SourceConfig, source_flux, split_response

square = SourceConfig.square(x0=0.5, t0=5.0)
gauss = SourceConfig.gaussian(sigma=0.5, t0=5.0)

for cfg in (square, gauss):
    print(cfg)
    for x in (0.0, 0.5, 1.0, 1.4):
        v = source_flux(cfg, x, 1.0, 1.0)
        print(f"  x={x:3.1f}  uncollided={v.uncollided:.6f}  collided={v.collided:.6f}")

# one set-up, many c values: this is what the expansion code relies on
uncollided, response = split_response(square, 0.25, 2.0)
cs = np.linspace(0.5, 1.5, 5)
print("square source at x=0.25, t=2:", uncollided + response(cs))

# the flux vanishes beyond x0 + t
print("outside support:", source_flux(square, 0.5 + 1.0 + 0.1, 1.0, 1.0).total)
