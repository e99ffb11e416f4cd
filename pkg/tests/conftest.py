import numpy as np
import pytest
from scipy import integrate


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


def brute_plane_collided(x, t, c):
    """Collided plane-pulse flux by scipy quad on the raw contour form."""
    eta = abs(x) / t
    if eta >= 1:
        return 0.0
    q = (1 + eta) / (1 - eta)

    def f(u):
        zeta = (np.log(q) + 1j * u) / (eta + 1j * np.tan(u / 2))
        return np.real(np.cos(u / 2) ** -2 * zeta**2 * np.exp(c * t * (1 - eta**2) * zeta / 2))

    val, _ = integrate.quad(f, 0, np.pi, limit=400, epsabs=0, epsrel=1e-13)
    return c * np.exp(-t) * (1 - eta**2) / (8 * np.pi) * val
