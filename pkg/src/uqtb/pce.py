"""Legendre polynomial chaos in one uniform random variable.

The scattering ratio is ``c = mean + half_width * theta`` with
``theta ~ U[-1, 1]``.  The collided flux at a fixed point is expanded as

    phi_c(theta) ~ sum_j a_j P_j(theta),   a_j = (2j+1)/2 int phi_c P_j dtheta

and the uncollided flux, which does not depend on ``c``, is carried along
as a constant offset.  Orthogonality then gives the mean and variance of
the expansion directly from its coefficients.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .quadrature import gauss_legendre
from .sources import SourceConfig, split_response

__all__ = [
    "UncertainScatteringRatio",
    "ChaosExpansion",
    "AliasingWarning",
    "legendre_table",
    "project",
    "evaluate",
    "expectation",
    "variance",
    "expand",
    "RECORD_FIELDS",
]

ALIASING_TOL = 1e-9


class AliasingWarning(UserWarning):
    """Doubling the projection quadrature moved a coefficient noticeably."""


@dataclass(frozen=True)
class UncertainScatteringRatio:
    """``c = mean + half_width * theta`` with ``theta`` uniform on [-1, 1]."""

    mean: float
    half_width: float = 0.0

    def __post_init__(self):
        if not self.mean > 0:
            raise ValueError(f"mean scattering ratio must be positive, got {self.mean}")
        if self.half_width < 0:
            raise ValueError(f"half_width must be non-negative, got {self.half_width}")
        if not self.mean - self.half_width > 0:
            raise ValueError("mean - half_width must be positive so that c > 0 on the whole support")

    @classmethod
    def relative(cls, mean: float, fraction: float):
        """Uncertainty given as a fraction of the mean, e.g. 0.1 for 10%."""
        return cls(mean, fraction * mean)

    def realize(self, theta):
        return self.mean + self.half_width * np.asarray(theta, dtype=float)

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.where(np.abs(theta) <= 1.0, 0.5, 0.0)

    @property
    def bounds(self) -> tuple[float, float]:
        return self.mean - self.half_width, self.mean + self.half_width


def legendre_table(order: int, theta) -> np.ndarray:
    """``P_0 .. P_order`` at ``theta`` by the three-term recurrence.

    Returns an array of shape ``(order + 1,) + theta.shape``.
    """
    theta = np.asarray(theta, dtype=float)
    table = np.empty((order + 1,) + theta.shape)
    table[0] = 1.0
    if order >= 1:
        table[1] = theta
    for j in range(1, order):
        table[j + 1] = ((2 * j + 1) * theta * table[j] - j * table[j - 1]) / (j + 1)
    return table


RECORD_FIELDS = ("source", "location", "t", "cbar", "omega1", "N")


@dataclass(frozen=True, eq=False)
class ChaosExpansion:
    """Coefficients of a Legendre expansion plus the deterministic offset.

    ``location``, ``time``, ``source`` and ``uncertainty`` describe where the
    expansion was built; they are metadata and play no part in evaluation.
    ``aliased`` is set when the projection failed its quadrature-doubling
    check.
    """

    coeffs: np.ndarray
    uncollided_offset: float = 0.0
    location: float | None = None
    time: float | None = None
    source: SourceConfig | None = None
    uncertainty: UncertainScatteringRatio | None = None
    aliased: bool = field(default=False, compare=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "uncollided_offset", float(self.uncollided_offset))

    def __eq__(self, other):
        if not isinstance(other, ChaosExpansion):
            return NotImplemented
        return (
            np.array_equal(self.coeffs, other.coeffs)
            and self.uncollided_offset == other.uncollided_offset
            and self.location == other.location
            and self.time == other.time
            and self.source == other.source
            and self.uncertainty == other.uncertainty
        )

    __hash__ = None

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, theta):
        return evaluate(self, theta)

    def expectation(self) -> float:
        return expectation(self)

    def variance(self) -> float:
        return variance(self)

    def truncate(self, order: int) -> "ChaosExpansion":
        """The same expansion keeping only ``a_0 .. a_order``."""
        if not 0 <= order <= self.order:
            raise ValueError(f"order must lie in [0, {self.order}]")
        return ChaosExpansion(
            self.coeffs[: order + 1],
            self.uncollided_offset,
            self.location,
            self.time,
            self.source,
            self.uncertainty,
            self.aliased,
        )

    def with_offset(self, offset: float) -> "ChaosExpansion":
        return ChaosExpansion(self.coeffs, offset, self.location, self.time, self.source, self.uncertainty, self.aliased)

    def to_record(self) -> dict:
        """Flat record: source, location, t, cbar, omega1, N, a0..aN, phi_u."""
        unc = self.uncertainty
        rec = {
            "source": self.source.kind if self.source else None,
            "location": self.location,
            "t": self.time,
            "cbar": unc.mean if unc else None,
            "omega1": unc.half_width if unc else None,
            "N": self.order,
        }
        rec.update({f"a{j}": float(a) for j, a in enumerate(self.coeffs)})
        rec["phi_u"] = self.uncollided_offset
        return rec

    @classmethod
    def from_record(cls, rec: dict, source: SourceConfig | None = None) -> "ChaosExpansion":
        n = int(rec["N"])
        coeffs = [float(rec[f"a{j}"]) for j in range(n + 1)]
        unc = None
        if rec.get("cbar") not in (None, ""):
            unc = UncertainScatteringRatio(float(rec["cbar"]), float(rec["omega1"]))
        if source is None and rec.get("source") in ("plane", "line"):
            source = SourceConfig(rec["source"])

        def opt(key):
            v = rec.get(key)
            return None if v in (None, "") else float(v)

        return cls(coeffs, float(rec["phi_u"]), opt("location"), opt("t"), source, unc)

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    def csv_header(self) -> str:
        return ",".join(self.to_record())

    def csv_row(self) -> str:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, str):
                return v
            if isinstance(v, (int, np.integer)):
                return str(v)
            return f"{v:.16e}"

        return ",".join(fmt(v) for v in self.to_record().values())


def _projection(values, order, rule):
    table = legendre_table(order, rule.nodes)
    norm = (2 * np.arange(order + 1) + 1) / 2.0
    return norm * (table @ (rule.weights * values))


def project(
    flux_fn,
    order: int,
    quad_order: int | None = None,
    *,
    uncollided_offset: float = 0.0,
    check_aliasing: bool = True,
    **metadata,
) -> ChaosExpansion:
    """Project ``flux_fn`` (``theta -> collided flux``) onto ``P_0 .. P_order``.

    ``flux_fn`` is called once with the full array of Gauss-Legendre nodes.
    The default ``quad_order`` is ``max(2 * order, 16)``.  With
    ``check_aliasing`` the projection is repeated at twice the quadrature
    order; if any coefficient moves by more than 1e-9 an
    :class:`AliasingWarning` is issued and the result is flagged.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if quad_order is None:
        quad_order = max(2 * order, 16)
    if quad_order < order + 1:
        raise ValueError("quad_order must be at least order + 1")
    rule = gauss_legendre(quad_order)
    coeffs = _projection(np.asarray(flux_fn(rule.nodes), dtype=float), order, rule)
    aliased = False
    if check_aliasing:
        fine = gauss_legendre(2 * quad_order)
        ref = _projection(np.asarray(flux_fn(fine.nodes), dtype=float), order, fine)
        shift = np.max(np.abs(ref - coeffs))
        if shift > ALIASING_TOL:
            aliased = True
            warnings.warn(
                f"projection coefficients moved by {shift:.2e} when the quadrature was doubled",
                AliasingWarning,
                stacklevel=2,
            )
    return ChaosExpansion(coeffs, uncollided_offset, aliased=aliased, **metadata)


def evaluate(exp: ChaosExpansion, theta):
    """Offset plus ``sum_j a_j P_j(theta)`` for ``theta`` in [-1, 1]."""
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > 1.0):
        raise DomainError("theta must lie in [-1, 1]")
    vals = exp.uncollided_offset + np.tensordot(exp.coeffs, legendre_table(exp.order, theta), axes=1)
    return vals[()] if vals.ndim == 0 else vals


def expectation(exp: ChaosExpansion) -> float:
    return exp.uncollided_offset + float(exp.coeffs[0])


def variance(exp: ChaosExpansion) -> float:
    j = np.arange(1, exp.order + 1)
    return float(np.sum(exp.coeffs[1:] ** 2 / (2 * j + 1)))


def expand(
    source: SourceConfig,
    x: float,
    t: float,
    uncertainty: UncertainScatteringRatio,
    order: int = 6,
    quad_order: int | None = None,
    check_aliasing: bool = True,
) -> ChaosExpansion:
    """Expansion of a benchmark source's flux at ``(x, t)``."""
    offset, response = split_response(source, x, t)
    meta = dict(location=x, time=t, source=source, uncertainty=uncertainty)
    if uncertainty.half_width == 0.0:
        # degenerate: the projection of a constant, written down exactly
        coeffs = np.zeros(order + 1)
        coeffs[0] = float(np.atleast_1d(response(uncertainty.mean))[0])
        return ChaosExpansion(coeffs, offset, **meta)
    return project(
        lambda th: response(uncertainty.realize(th)),
        order,
        quad_order,
        uncollided_offset=offset,
        check_aliasing=check_aliasing,
        **meta,
    )
