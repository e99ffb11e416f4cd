"""
Green's-function fluxes in an infinite medium
=============================================

Plane, point and line pulses released at t = 0.  Everything is measured in
mean free paths and mean free times, so particles move at unit speed and
nothing exists beyond |x| = t.
"""

import numpy as np
from scipy.integrate import trapezoid

from uqtb.kernels import collided_plane, line_source_flux, point_source_flux, uncollided_plane

# the uncollided flux is flat inside the light cone and drops to zero outside
t = 1.0
for x in (0.0, 0.5, 0.99, 1.01):
    print(f"x={x:5.2f}  uncollided={uncollided_plane(x, t):.6f}  collided(c=1)={collided_plane(x, t, 1.0):.6f}")

# the collided part scales with c and grows with it; c is vectorised
cs = np.array([0.0, 0.5, 1.0, 1.5])
print("collided at x=0, t=1 for c =", cs, "->", collided_plane(0.0, 1.0, cs))

# total particle count: uncollided mass plus the collided integral is exp(t(c-1))
xs = np.linspace(-t, t, 4001)
for c in (0.5, 1.0, 1.25):
    collided = trapezoid([collided_plane(x, t, c) for x in xs], xs)
    print(f"c={c}: mass {2 * t * uncollided_plane(0, t) + collided:.6f}  vs exp(t(c-1)) {np.exp(t * (c - 1)):.6f}")

# point and line pulses come from the plane pulse, and report a FluxValue
print(point_source_flux(0.5, 1.0, 1.0))
line = line_source_flux(0.5, 1.0, 1.0)
print(f"line source at r=0.5, t=1: uncollided {line.uncollided:.6f}, collided {line.collided:.6f}, total {line.total:.6f}")
