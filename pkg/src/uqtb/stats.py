"""Quantiles by quasi-random sampling, and the analytic reference values.

Three references are kept independent of the chaos expansion so it can be
checked against them:

* :func:`direct_moments` integrates the flux and its square over ``theta``.
* :func:`analytic_expectation_plane` integrates the plane-pulse collided
  flux over ``c`` in closed form, leaving a single contour integral.
* :func:`quantile_oracle` uses that a strictly increasing function of a
  random variable maps the input's ``p``-quantile to its own ``p``-quantile.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MonotonicityError
from .kernels import WAVEFRONT_EPS, _check_time, _integrand_terms
from .pce import ChaosExpansion, UncertainScatteringRatio, legendre_table
from .quadrature import adaptive_gauss_legendre

__all__ = [
    "QuantileTable",
    "DEFAULT_PERCENTILES",
    "sobol_sequence",
    "empirical_quantiles",
    "quantile_oracle",
    "analytic_expectation_plane",
    "direct_moments",
]

DEFAULT_PERCENTILES = np.round(np.arange(1, 100) / 100.0, 2)


@dataclass(frozen=True)
class QuantileTable:
    """Percentile grid and the estimated flux at each percentile."""

    percentiles: np.ndarray
    values: np.ndarray
    n_samples: int
    estimator: str = "linear"

    def __post_init__(self):
        p = np.asarray(self.percentiles, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.shape != v.shape or p.ndim != 1:
            raise ValueError("percentiles and values must be 1-D arrays of equal length")
        if np.any((p <= 0) | (p >= 1)) or np.any(np.diff(p) <= 0):
            raise ValueError("percentiles must be strictly increasing inside (0, 1)")
        object.__setattr__(self, "percentiles", p)
        object.__setattr__(self, "values", v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("p,value,n_samples\n")
        for p, v in zip(self.percentiles, self.values):
            buf.write(f"{p:.16e},{v:.16e},{self.n_samples}\n")
        return buf.getvalue()


def sobol_sequence(n: int) -> np.ndarray:
    """First ``n`` points of the 1-D Sobol sequence, mapped to (-1, 1).

    In one dimension the Sobol points are the base-2 radical inverses
    (van der Corput sequence) of ``1, 2, ..., n``; this returns them in that
    natural order: 0.5, 0.25, 0.75, 0.125, ... before mapping.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    idx = np.arange(1, n + 1, dtype=np.uint64)
    bits = int(n).bit_length()
    acc = np.zeros(n, dtype=np.uint64)
    for b in range(bits):
        acc |= ((idx >> np.uint64(b)) & np.uint64(1)) << np.uint64(bits - 1 - b)
    unit = acc.astype(float) / float(1 << bits)
    return 2.0 * unit - 1.0


def empirical_quantiles(exp: ChaosExpansion, n: int = 2**20, grid=None, samples=None) -> QuantileTable:
    """Percentiles of an expansion from ``n`` Sobol samples of ``theta``.

    The estimator is the linear interpolation of order statistics at rank
    ``p * (n - 1)`` (zero-based).  ``samples`` may pass a precomputed
    Legendre table of the Sobol points (shape ``(>= order + 1, n)``) when
    many expansions share one sample set.
    """
    if n < 100:
        raise ValueError("at least 100 samples are required")
    grid = DEFAULT_PERCENTILES if grid is None else np.asarray(grid, dtype=float)
    if samples is None:
        table = legendre_table(exp.order, sobol_sequence(n))
    else:
        table = samples[: exp.order + 1, :n]
    values = exp.uncollided_offset + exp.coeffs @ table
    q = np.quantile(values, grid, method="linear")
    return QuantileTable(grid, q, n, "linear")


def quantile_oracle(phi, uncertainty: UncertainScatteringRatio, p, probes: int = 8):
    """The ``p``-quantile of ``phi(c)`` for ``c = mean + half_width * theta``.

    Valid when ``phi`` is strictly increasing in ``c``; this is checked at
    ``probes`` equispaced values of ``c`` first.  ``phi`` must accept an
    array of scattering ratios.

    Raises
    ------
    MonotonicityError
        If ``phi`` is not strictly increasing at the probes.
    """
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise ValueError("percentiles must lie in (0, 1)")
    if uncertainty.half_width > 0:
        lo, hi = uncertainty.bounds
        check = np.asarray(phi(np.linspace(lo, hi, probes)), dtype=float)
        if np.any(np.diff(check) <= 0):
            raise MonotonicityError("phi is not strictly increasing in c; quantile theorem does not apply")
    out = np.asarray(phi(uncertainty.realize(2.0 * p - 1.0)), dtype=float)
    return out[()] if out.ndim == 0 else out


def _h(z):
    """``(z e^z - (e^z - 1)) / z^2``, accurate for small ``|z|``."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 0.5
    out = np.empty_like(z)
    zs = z[small]
    acc = np.zeros_like(zs)
    # sum_{n>=2} (n-1)/n! z^(n-2), Horner from the top
    for n in range(22, 1, -1):
        acc = acc * zs + (n - 1) / math.factorial(n)
    out[small] = acc
    zl = z[~small]
    out[~small] = (zl * np.exp(zl) - np.expm1(zl)) / (zl * zl)
    return out


def analytic_expectation_plane(x: float, t: float, uncertainty: UncertainScatteringRatio, rtol: float = 1e-12):
    """Mean over ``c`` of the collided plane-pulse flux at ``(x, t)``.

    Integrating the ``c``-dependence of the collided integrand exactly over
    ``[mean - w, mean + w]`` gives

        E = exp(-t) (1 - eta^2) / (16 pi w) int_0^pi
            Re[zeta^2 (c+^2 h(c+ k) - c-^2 h(c- k))] du,   k = t (1 - eta^2) xi / 2

    with ``h(z) = (z e^z - e^z + 1)/z^2``.  Writing it through ``zeta`` and
    ``h`` avoids the cancellation of the raw form near ``u = pi``.
    """
    _check_time(t)
    w = uncertainty.half_width
    if not w > 0:
        raise DomainError("the closed form needs a positive half-width")
    eta = abs(x) / t
    if not 1.0 - eta > WAVEFRONT_EPS:
        return 0.0
    c_lo, c_hi = uncertainty.bounds
    e1 = 1.0 - eta * eta
    B = 0.5 * t * e1

    def f(u):
        zeta, xi, _, _ = _integrand_terms(np.array([eta]), u)
        k = B * xi[0]
        z2 = zeta[0] ** 2
        return np.real(z2 * (c_hi**2 * _h(c_hi * k) - c_lo**2 * _h(c_lo * k)))

    integral = adaptive_gauss_legendre(f, 0.0, math.pi, order=64, rtol=rtol, atol=1e-300)
    return math.exp(-t) * e1 / (16.0 * math.pi * w) * integral


def direct_moments(flux_fn, rtol: float = 1e-13, order: int = 20) -> tuple[float, float]:
    """Mean and variance of ``flux_fn(theta)`` for ``theta ~ U[-1, 1]``.

    Adaptive Gauss-Legendre on ``(1/2) int phi`` and ``(1/2) int phi^2``.
    ``flux_fn`` is called with arrays of ``theta``.
    """

    def f(theta):
        v = np.asarray(flux_fn(theta), dtype=float)
        return np.stack([v, v * v])

    first, second = 0.5 * adaptive_gauss_legendre(f, -1.0, 1.0, order=order, rtol=rtol, atol=1e-300)
    return float(first), float(second - first * first)
