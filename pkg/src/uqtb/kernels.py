"""Green's-function scalar fluxes for an infinite, isotropically scattering medium.

Units are mean free paths and mean free times.  The plane-pulse solution is
split into an uncollided part, which does not depend on the scattering
ratio ``c``, and a collided part given by a single contour integral over
``u in [0, pi]``.  Point and line pulses are derived from the plane pulse:

* point:  ``phi_pt(r) = -1/(2 pi r) * d phi_pl/dx`` at ``x = r``
* line:   ``phi_line(r) = integral over z of phi_pt(sqrt(r^2 + z^2))``

The collided integrand is evaluated in the form

    zeta = (log q + i u) / (eta cos(u/2) + i sin(u/2)),   xi = zeta cos(u/2)
    sec^2(u/2) Re[xi^2 exp(A xi)] = Re[zeta^2 exp(A xi)]

which stays finite at ``u = pi`` where ``sec^2`` blows up and ``xi`` vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import adaptive_gauss_legendre, composite_gauss_legendre, graded_gauss_legendre

__all__ = [
    "SimilarityPoint",
    "FluxValue",
    "WAVEFRONT_EPS",
    "GreenCloud",
    "uncollided_plane",
    "collided_plane",
    "collided_plane_dx",
    "collided_plane_matrix",
    "point_source_flux",
    "line_source_flux",
    "line_collided",
    "line_collided_cloud",
    "uncollided_line",
]

# inside-the-wavefront test: 1 - |eta| must exceed this
WAVEFRONT_EPS = 1e-12

# fixed u-rule for batched evaluation; spectrally converged, see tests
U_RULE = composite_gauss_legendre(np.linspace(0.0, math.pi, 3), 32)


@dataclass(frozen=True)
class SimilarityPoint:
    """A space-time point together with its similarity variables."""

    coord: float
    time: float

    def __post_init__(self):
        if not self.time > 0:
            raise DomainError(f"time must be positive, got {self.time}")

    @property
    def eta(self) -> float:
        return self.coord / self.time

    @property
    def inside(self) -> bool:
        """True strictly inside the wavefront."""
        return 1.0 - abs(self.eta) > WAVEFRONT_EPS

    @property
    def q(self) -> float | None:
        """``(1 + eta)/(1 - eta)``; ``None`` on or outside the wavefront."""
        if not self.inside:
            return None
        return (1.0 + self.eta) / (1.0 - self.eta)


@dataclass(frozen=True)
class FluxValue:
    """Scalar flux split into uncollided and collided parts."""

    uncollided: float | np.ndarray
    collided: float | np.ndarray

    @property
    def total(self):
        return self.uncollided + self.collided


def _check_time(t):
    if not np.all(np.asarray(t) > 0):
        raise DomainError(f"time must be positive, got {t}")


def uncollided_plane(x, t):
    """Uncollided plane-pulse flux ``exp(-t)/(2t)`` inside ``|x| < t``."""
    _check_time(t)
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    inside = 1.0 - np.abs(x) / t > WAVEFRONT_EPS
    out = np.where(inside, 0.5 * np.exp(-t) / t, 0.0)
    return out[()] if out.ndim == 0 else out


def uncollided_line(r, t):
    """Uncollided line-pulse flux ``exp(-t) / (2 pi t sqrt(t^2 - r^2))``."""
    _check_time(t)
    r, t = np.broadcast_arrays(np.asarray(r, float), np.asarray(t, float))
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    inside = 1.0 - r / t > WAVEFRONT_EPS
    rr = np.where(inside, r, 0.0)
    out = np.where(inside, np.exp(-t) / (2 * math.pi * t * np.sqrt(t * t - rr * rr)), 0.0)
    return out[()] if out.ndim == 0 else out


def _integrand_terms(eta, u):
    """zeta, xi, cos(u/2), eta*cos(u/2) + i sin(u/2) on an (eta, u) grid.

    ``eta`` must satisfy ``0 <= eta < 1``.
    """
    eta = np.asarray(eta, float)[..., None]
    h = 0.5 * u
    cs, sn = np.cos(h), np.sin(h)
    log_q = 2.0 * np.arctanh(eta)
    denom = eta * cs + 1j * sn
    zeta = (log_q + 1j * u) / denom
    return zeta, zeta * cs, cs, denom


def _collided_integrand(eta, tau, c, u, derivative):
    """Collided integrand on a ``(c, eta, u)`` grid.

    Without ``derivative``: ``(1 - eta^2) Re[zeta^2 e^{c B xi}]``.
    With ``derivative``: its ``eta``-derivative.  ``B = tau (1 - eta^2)/2``.
    """
    zeta, xi, cs, denom = _integrand_terms(eta, u)
    e1 = (1.0 - eta**2)[:, None]
    B = 0.5 * tau[:, None] * e1
    bxi = B * xi
    zeta2 = zeta * zeta
    if derivative:
        rho = (2.0 / e1 - xi) / denom
        base = -2.0 * eta[:, None] * zeta2 + 2.0 * e1 * zeta * rho
        lin = e1 * ((-tau * eta)[:, None] * zeta2 * xi + B * zeta2 * cs * rho)
    out = np.empty((len(c),) + bxi.shape)
    for k, ck in enumerate(c):
        e = np.exp(ck * bxi)
        if derivative:
            out[k] = np.real(e * (base + ck * lin))
        else:
            out[k] = np.real(zeta2 * e) * e1
    return out


def collided_plane_matrix(x, t, c, derivative: bool = False, rule=U_RULE):
    """Collided plane-pulse flux on many points at once with a fixed u-rule.

    Parameters
    ----------
    x, t : array_like
        Positions and times (broadcast together, flattened).
    c : array_like
        1-D array of scattering ratios.
    derivative : bool
        Return ``d phi_c / dx`` instead of ``phi_c``.

    Returns
    -------
    ndarray of shape ``(len(c), n_points)``.
    """
    x, t = np.broadcast_arrays(np.asarray(x, float).ravel(), np.asarray(t, float).ravel())
    c = np.atleast_1d(np.asarray(c, float))
    out = np.zeros((len(c), len(x)))
    eta = np.abs(x) / t
    inside = 1.0 - eta > WAVEFRONT_EPS
    if not np.any(inside):
        return out
    ei, ti = eta[inside], t[inside]
    vals = _collided_integrand(ei, ti, c, rule.nodes, derivative) @ rule.weights
    pref = np.exp(-ti) / (8.0 * math.pi)
    if derivative:
        pref = pref / ti * np.sign(x[inside])
    out[:, inside] = c[:, None] * pref * vals
    return out


def _scalar_or_array(c, vals):
    return float(vals[0]) if np.ndim(c) == 0 else vals.reshape(np.shape(c))


def _adaptive_collided(x, t, c, derivative, rtol):
    _check_time(t)
    cv = np.atleast_1d(np.asarray(c, float))
    if np.any(cv < 0):
        raise DomainError("scattering ratio must be non-negative")
    eta = abs(x) / t
    if not 1.0 - eta > WAVEFRONT_EPS:
        return _scalar_or_array(c, np.zeros(len(cv)))
    e = np.array([eta])
    tt = np.array([t])

    def f(u):
        return _collided_integrand(e, tt, cv, u, derivative)[:, 0, :]

    integral = adaptive_gauss_legendre(f, 0.0, math.pi, order=64, rtol=rtol, atol=1e-300)
    pref = cv * math.exp(-t) / (8.0 * math.pi)
    if derivative:
        pref = pref / t * math.copysign(1.0, x)
    return _scalar_or_array(c, pref * integral)


def collided_plane(x: float, t: float, c, rtol: float = 1e-10):
    """Collided plane-pulse flux by adaptive Gauss-Legendre in ``u``.

    ``c`` may be a scalar or an array; all values share one panel layout.
    The integral is evaluated at ``|x|`` so the result is exactly symmetric.
    """
    return _adaptive_collided(x, t, c, False, rtol)


def collided_plane_dx(x: float, t: float, c, rtol: float = 1e-10):
    """``d phi_c / dx`` of the plane pulse, differentiated under the integral."""
    return _adaptive_collided(x, t, c, True, rtol)


class GreenCloud:
    """A weighted sum of collided plane-pulse Green's functions.

    ``value(c) = sum_k weight_k * G(x_k, tau_k; c)`` where ``G`` is the
    collided plane-pulse flux (or its ``x``-derivative).  The ``c``-free parts
    of the integrand are precomputed once, which makes repeated evaluation
    over many scattering ratios cheap: this is the workhorse for source
    convolutions and for polynomial chaos projection.
    """

    def __init__(self, x, tau, weight, derivative: bool = False, rule=U_RULE):
        x, tau, weight = np.broadcast_arrays(
            np.asarray(x, float).ravel(), np.asarray(tau, float).ravel(), np.asarray(weight, float).ravel()
        )
        eta = np.abs(x) / tau
        keep = (1.0 - eta > WAVEFRONT_EPS) & (weight != 0)
        self.derivative = derivative
        self.size = int(keep.sum())
        eta, tau, x, weight = eta[keep], tau[keep], x[keep], weight[keep]
        zeta, xi, cs, denom = _integrand_terms(eta, rule.nodes)
        e1 = (1.0 - eta**2)[:, None]
        B = 0.5 * tau[:, None] * e1
        self._bxi = B * xi
        wu = rule.weights
        pref = weight * np.exp(-tau) / (8.0 * math.pi)
        zeta2 = zeta * zeta
        if derivative:
            pref = pref / tau * np.sign(x)
            rho = (2.0 / e1 - xi) / denom
            base = -2.0 * eta[:, None] * zeta2 + 2.0 * e1 * zeta * rho
            lin = e1 * ((-tau * eta)[:, None] * zeta2 * xi + B * zeta2 * cs * rho)
            self._terms = ((pref[:, None] * wu) * base, (pref[:, None] * wu) * lin)
        else:
            self._terms = ((pref[:, None] * wu) * e1 * zeta2, None)

    def __call__(self, c):
        cv = np.atleast_1d(np.asarray(c, float))
        out = np.zeros(len(cv))
        if self.size:
            base, lin = self._terms
            for k, ck in enumerate(cv):
                e = np.exp(ck * self._bxi)
                z = base if lin is None else base + ck * lin
                out[k] = ck * np.real(z * e).sum()
        return _scalar_or_array(c, out)


def point_source_flux(r: float, t: float, c) -> FluxValue:
    """Point-pulse scalar flux off the wavefront shell.

    The uncollided point flux is a delta-function shell on ``r = t``; it is
    not representable pointwise, so ``uncollided`` is 0 for ``r < t``.
    """
    _check_time(t)
    if r <= 0:
        raise DomainError("point-source flux is singular at r = 0 (and undefined for r < 0)")
    zero = _scalar_or_array(c, np.zeros(np.size(c)))
    if not 1.0 - r / t > WAVEFRONT_EPS:
        return FluxValue(0.0, zero)
    dphi = collided_plane_dx(r, t, c)
    return FluxValue(0.0, -dphi / (2.0 * math.pi * r))


def line_collided(r: float, t: float, c, rtol: float = 1e-10):
    """Collided line-pulse flux as an axial integral of the point solution.

    With ``z = sqrt(t^2 - r^2) * s`` the integrand is smooth on ``[0, 1)``
    apart from a logarithmic singularity at the wavefront ``s = 1``, which
    the adaptive bisection resolves.
    """
    _check_time(t)
    if r < 0:
        raise DomainError("radius must be non-negative")
    cv = np.atleast_1d(np.asarray(c, float))
    if not 1.0 - r / t > WAVEFRONT_EPS:
        return _scalar_or_array(c, np.zeros(len(cv)))
    zmax = math.sqrt(t * t - r * r)

    def f(s):
        rho = np.hypot(r, zmax * s)
        dphi = collided_plane_matrix(rho, t, cv, derivative=True)
        return -dphi / (2.0 * math.pi * rho)

    # even in z: twice the half-line integral
    return _scalar_or_array(c, 2.0 * zmax * adaptive_gauss_legendre(f, 0.0, 1.0, order=64, rtol=rtol, atol=1e-300))


def line_source_flux(r: float, t: float, c) -> FluxValue:
    """Line-pulse scalar flux at radius ``r`` and time ``t``."""
    _check_time(t)
    if r < 0:
        raise DomainError("radius must be non-negative")
    return FluxValue(float(uncollided_line(r, t)), line_collided(r, t, c))


def line_collided_cloud(r: float, t: float, order: int = 40) -> GreenCloud:
    """Fixed-rule version of :func:`line_collided` as a reusable cloud.

    Nodes are graded towards the wavefront, which absorbs the logarithmic
    singularity there; agreement with the adaptive path is ~1e-12.
    """
    zmax = math.sqrt(max(t * t - r * r, 0.0))
    rule = graded_gauss_legendre(order, 0.0, 1.0)
    rho = np.hypot(r, zmax * rule.nodes)
    return GreenCloud(rho, t, -2.0 * zmax * rule.weights / (2.0 * math.pi * rho), derivative=True)
