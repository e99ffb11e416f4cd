"""Gauss-Legendre rules: fixed, composite, endpoint-clustered and adaptive.

All integrands are called with a 1-D array of abscissas and must return an
array whose *last* axis runs over those abscissas.  Leading axes are treated
as a batch (e.g. one row per scattering ratio) and are integrated together,
so a single panel decomposition serves the whole batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "composite_gauss_legendre",
    "clustered_gauss_legendre",
    "graded_gauss_legendre",
    "adaptive_gauss_legendre",
]


@lru_cache(maxsize=64)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of an interpolatory rule."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, f):
        """Apply the rule to ``f`` (reduces over the last axis)."""
        return np.asarray(f(self.nodes)) @ self.weights


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """``order``-point Gauss-Legendre rule mapped to ``[a, b]``."""
    if order < 1:
        raise ValueError("order must be positive")
    x, w = _leggauss(order)
    half = 0.5 * (b - a)
    return QuadratureRule(half * x + 0.5 * (a + b), half * w)


def composite_gauss_legendre(edges, order: int) -> QuadratureRule:
    """Gauss-Legendre rule of ``order`` nodes on every panel between ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return QuadratureRule((half * x + 0.5 * (a + b)).ravel(), (half * w).ravel())


def clustered_gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule pushed through the map ``s -> (3s - s^3)/2``.

    The map has zero slope at both ends, so nodes crowd towards ``a`` and
    ``b``.  Use it for integrands with weak (log or kink) endpoint
    singularities, such as a Green's function evaluated up to its wavefront.
    """
    s, w = _leggauss(order)
    y = 0.5 * (3.0 * s - s**3)
    jac = 1.5 * (1.0 - s**2)
    half = 0.5 * (b - a)
    return QuadratureRule(half * y + 0.5 * (a + b), half * w * jac)


def graded_gauss_legendre(order: int, a: float, b: float, power: int = 4) -> QuadratureRule:
    """Gauss-Legendre rule graded towards ``b`` by ``s = 1 - (1 - v)^power``.

    An endpoint singularity like ``log(b - y)`` becomes
    ``(1 - v)^(power - 1) log(1 - v)`` in the new variable.
    """
    v, w = _leggauss(order)
    v = 0.5 * (v + 1.0)
    s = 1.0 - (1.0 - v) ** power
    jac = 0.5 * power * (1.0 - v) ** (power - 1)
    return QuadratureRule(a + (b - a) * s, (b - a) * w * jac)


def adaptive_gauss_legendre(
    f,
    a: float,
    b: float,
    order: int = 64,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_panels: int = 1024,
):
    """Integrate ``f`` over ``[a, b]`` by adaptive bisection.

    Each panel is compared against the sum over its two halves; a panel is
    accepted when the two estimates agree to ``max(atol, rtol * |I|)`` for
    every batch member, where ``I`` is the running estimate of the total.
    All panels of one refinement level are evaluated in a single call to
    ``f``.  Accepted contributions are summed in left-to-right order, so the
    result does not depend on the order in which panels converged.

    Raises
    ------
    ConvergenceError
        If more than ``max_panels`` panels would be needed.
    """
    x, w = _leggauss(order)

    def panel_sums(lefts, rights):
        half = 0.5 * (rights - lefts)
        nodes = (half[:, None] * x + 0.5 * (lefts + rights)[:, None]).ravel()
        vals = np.asarray(f(nodes), dtype=float)
        vals = vals.reshape(vals.shape[:-1] + (len(lefts), order))
        return (vals @ w) * half

    lefts = np.array([a], dtype=float)
    rights = np.array([b], dtype=float)
    coarse = panel_sums(lefts, rights)
    accepted: list[tuple[np.ndarray, np.ndarray]] = []
    while True:
        mids = 0.5 * (lefts + rights)
        both = panel_sums(np.concatenate([lefts, mids]), np.concatenate([mids, rights]))
        n = len(lefts)
        fine = both[..., :n] + both[..., n:]
        total = sum(v.sum(axis=-1) for _, v in accepted) + fine.sum(axis=-1)
        scale = np.max(np.abs(total)) if np.ndim(total) else abs(total)
        tol = max(atol, rtol * scale)
        err = np.abs(fine - coarse)
        if err.ndim > 1:
            err = err.reshape(-1, n).max(axis=0)
        ok = err <= tol
        if np.any(ok):
            accepted.append((lefts[ok], fine[..., ok]))
        if np.all(ok):
            break
        bad = ~ok
        if 2 * bad.sum() + sum(len(l) for l, _ in accepted) > max_panels:
            raise ConvergenceError(
                f"adaptive quadrature on [{a}, {b}] did not reach rtol={rtol} "
                f"within {max_panels} panels"
            )
        lefts = np.concatenate([lefts[bad], mids[bad]])
        rights = np.concatenate([mids[bad], rights[bad]])
        coarse = np.concatenate([both[..., :n][..., bad], both[..., n:][..., bad]], axis=-1)

    starts = np.concatenate([l for l, _ in accepted])
    parts = np.concatenate([v for _, v in accepted], axis=-1)
    return parts[..., np.argsort(starts, kind="stable")].sum(axis=-1)
