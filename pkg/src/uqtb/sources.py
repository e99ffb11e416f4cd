"""Finite sources: convolutions of the plane-pulse Green's function.

A source ``S(x) * step(t0 - t)`` produces

    phi(x, t) = int_0^min(t, t0) dt' int dx' S(x') G(x - x', t - t')

With ``tau = t - t'`` the outer integral is split wherever a wavefront
``x -+ tau`` crosses an edge of the source support, so the inner
integration interval changes smoothly within each panel.  The inner
variable is ``eta = (x - x')/tau``; cone edges sit at ``eta = +-1`` where
the collided Green's function has a weak logarithmic kink, and both
rules cluster their nodes at the panel ends.

The uncollided part is reduced to a single ``tau`` integral because the
uncollided Green's function is flat in ``x`` inside its cone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import erf

from .errors import DomainError
from .kernels import (
    FluxValue,
    GreenCloud,
    collided_plane,
    line_collided_cloud,
    uncollided_line,
    uncollided_plane,
)
from .quadrature import clustered_gauss_legendre

__all__ = [
    "SourceConfig",
    "GAUSSIAN_CUTOFF",
    "square_source_flux",
    "gaussian_source_flux",
    "source_flux",
    "uncollided_flux",
    "collided_response",
    "split_response",
    "support_half_width",
]

KINDS = ("plane", "square", "gaussian", "line")
_ALIASES = {"plane_pulse": "plane", "pulse": "plane"}

# source truncation in units of sigma: exp(-8.5^2) ~ 5e-32 of peak
GAUSSIAN_CUTOFF = 8.5


@dataclass(frozen=True)
class SourceConfig:
    """Which benchmark source, with its shape parameters.

    ``x0`` is the half-width of the square source, ``t0`` the duration of
    either finite source and ``sigma`` the Gaussian width in
    ``exp(-x^2/sigma^2)``.  Fields that do not apply to ``kind`` are None.
    """

    kind: str = "plane"
    x0: float | None = None
    t0: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        needed = {"plane": (), "line": (), "square": ("x0", "t0"), "gaussian": ("sigma", "t0")}[kind]
        for name in ("x0", "t0", "sigma"):
            value = getattr(self, name)
            if name in needed:
                if value is None or not value > 0:
                    raise ValueError(f"{kind} source needs {name} > 0, got {value}")
                object.__setattr__(self, name, float(value))
            elif value is not None:
                raise ValueError(f"{name} does not apply to a {kind} source")

    @classmethod
    def plane(cls):
        return cls("plane")

    @classmethod
    def line(cls):
        return cls("line")

    @classmethod
    def square(cls, x0: float = 0.5, t0: float = 5.0):
        return cls("square", x0=x0, t0=t0)

    @classmethod
    def gaussian(cls, sigma: float = 0.5, t0: float = 5.0):
        return cls("gaussian", sigma=sigma, t0=t0)

    @classmethod
    def default(cls, kind: str):
        """The standard benchmark configuration for ``kind``."""
        kind = _ALIASES.get(kind, kind)
        return {"plane": cls.plane, "line": cls.line, "square": cls.square, "gaussian": cls.gaussian}[kind]()

    @property
    def cylindrical(self) -> bool:
        return self.kind == "line"

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def support_half_width(cfg: SourceConfig, t: float) -> float:
    """Half-width of the region where the flux is non-negligible at time ``t``."""
    if cfg.kind == "square":
        return cfg.x0 + t
    if cfg.kind == "gaussian":
        return t + 4.0 * cfg.sigma
    return t


def _tau_panels(x, t, t0, edge):
    """Outer ``tau`` panel edges for a source supported on ``[-edge, edge]``."""
    lo = max(t - t0, abs(x) - edge, 0.0)
    if lo >= t:
        return None
    cuts = [v for v in (edge - x, edge + x, x - edge, -x - edge) if lo < v < t]
    return np.unique(np.array([lo, *cuts, t]))


def _convolution_nodes(x, t, t0, edge, profile, n_time, n_space, split_center):
    """Quadrature points ``(x - x', tau, weight)`` and the uncollided integral."""
    edges = _tau_panels(x, t, t0, edge)
    if edges is None:
        return np.zeros(0), np.ones(0), np.zeros(0), 0.0
    inner = clustered_gauss_legendre(n_space)
    taus, wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        rule = clustered_gauss_legendre(n_time, a, b)
        taus.append(rule.nodes)
        wts.append(rule.weights)
    tau = np.concatenate(taus)
    w_tau = np.concatenate(wts)
    lo = np.maximum(-edge, x - tau)
    hi = np.minimum(edge, x + tau)

    pieces = [(lo, hi)]
    if split_center:
        mid = np.clip(0.0, lo, hi)
        pieces = [(lo, mid), (mid, hi)]
    dx, taus_out, weights = [], [], []
    for a, b in pieces:
        half = 0.5 * (b - a)
        xp = 0.5 * (a + b)[:, None] + half[:, None] * inner.nodes
        w = (w_tau * half)[:, None] * inner.weights * profile(xp)
        dx.append(x - xp)
        taus_out.append(np.broadcast_to(tau[:, None], xp.shape))
        weights.append(w)
    dx = np.concatenate([d.ravel() for d in dx])
    tt = np.concatenate([d.ravel() for d in taus_out])
    ww = np.concatenate([d.ravel() for d in weights])
    return dx, tt, ww, (tau, w_tau, lo, hi)


def _square_uncollided(tau, w_tau, lo, hi):
    # int dx' of exp(-tau)/(2 tau) over the cone/source overlap
    return float(np.sum(w_tau * np.exp(-tau) * (hi - lo) / (2.0 * tau)))


def _gaussian_uncollided(tau, w_tau, lo, hi, sigma):
    mass = 0.5 * math.sqrt(math.pi) * sigma * (erf(hi / sigma) - erf(lo / sigma))
    return float(np.sum(w_tau * np.exp(-tau) * mass / (2.0 * tau)))


def _square_profile(xp):
    return np.ones_like(xp)


def _gaussian_profile(sigma):
    return lambda xp: np.exp(-((xp / sigma) ** 2))


def _finite_source(cfg: SourceConfig, x: float, t: float, n_time: int, n_space: int):
    """(uncollided value, GreenCloud for the collided part)."""
    if not t > 0:
        raise DomainError(f"time must be positive, got {t}")
    if cfg.kind == "square":
        edge, profile, split = cfg.x0, _square_profile, False
    elif cfg.kind == "gaussian":
        edge, profile, split = GAUSSIAN_CUTOFF * cfg.sigma, _gaussian_profile(cfg.sigma), True
    else:
        raise ValueError(f"{cfg.kind} is not a finite source")
    dx, tau, w, extra = _convolution_nodes(x, t, cfg.t0, edge, profile, n_time, n_space, split)
    if not len(dx):
        return 0.0, GreenCloud(dx, tau, w)
    if cfg.kind == "square":
        unc = _square_uncollided(*extra)
    else:
        unc = _gaussian_uncollided(*extra, cfg.sigma)
    return unc, GreenCloud(dx, tau, w)


def square_source_flux(x: float, t: float, c, cfg: SourceConfig | None = None, n_time: int = 32, n_space: int = 32) -> FluxValue:
    """Scalar flux of the square source ``step(x0 - |x|) step(t0 - t)``."""
    cfg = cfg or SourceConfig.square()
    if cfg.kind != "square":
        raise ValueError("square_source_flux needs a square SourceConfig")
    unc, cloud = _finite_source(cfg, x, t, n_time, n_space)
    return FluxValue(unc, cloud(c))


def gaussian_source_flux(x: float, t: float, c, cfg: SourceConfig | None = None, n_time: int = 32, n_space: int = 40) -> FluxValue:
    """Scalar flux of the Gaussian source ``exp(-x^2/sigma^2) step(t0 - t)``."""
    cfg = cfg or SourceConfig.gaussian()
    if cfg.kind != "gaussian":
        raise ValueError("gaussian_source_flux needs a gaussian SourceConfig")
    unc, cloud = _finite_source(cfg, x, t, n_time, n_space)
    return FluxValue(unc, cloud(c))


def _check_coord(cfg, x):
    if cfg.kind == "line" and x < 0:
        raise DomainError(f"line-source radius must be non-negative, got {x}")


def uncollided_flux(cfg: SourceConfig, x: float, t: float) -> float:
    """The deterministic (``c``-independent) part of the flux."""
    _check_coord(cfg, x)
    if cfg.kind == "plane":
        return float(uncollided_plane(x, t))
    if cfg.kind == "line":
        return float(uncollided_line(x, t))
    return _finite_source(cfg, x, t, 32, 32)[0]


def collided_response(cfg: SourceConfig, x: float, t: float):
    """Callable ``c -> collided flux`` at a fixed point, vectorised over ``c``.

    Geometry-dependent work is done once here, so the returned function is
    cheap to call at many scattering ratios.
    """
    _check_coord(cfg, x)
    if not t > 0:
        raise DomainError(f"time must be positive, got {t}")
    if cfg.kind == "plane":
        return lambda c: collided_plane(x, t, c)
    if cfg.kind == "line":
        return line_collided_cloud(x, t)
    n_space = 40 if cfg.kind == "gaussian" else 32
    return _finite_source(cfg, x, t, 32, n_space)[1]


def split_response(cfg: SourceConfig, x: float, t: float):
    """``(uncollided value, c -> collided flux)`` sharing one set-up."""
    _check_coord(cfg, x)
    if cfg.kind in ("square", "gaussian"):
        n_space = 40 if cfg.kind == "gaussian" else 32
        return _finite_source(cfg, x, t, 32, n_space)
    return uncollided_flux(cfg, x, t), collided_response(cfg, x, t)


def source_flux(cfg: SourceConfig, x: float, t: float, c) -> FluxValue:
    """Uncollided and collided flux of any benchmark source."""
    unc, response = split_response(cfg, x, t)
    return FluxValue(unc, response(c))
