"""Benchmark studies: flux profiles, convergence sweeps and the mass study.

Every study takes a :class:`StudyConfig` and returns a :class:`Table` whose
rows follow the input grid order.  Nothing here draws random numbers; the
only sampling is the deterministic Sobol sequence.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .kernels import collided_plane_matrix, line_collided_cloud, uncollided_plane
from .pce import ChaosExpansion, UncertainScatteringRatio, expand, legendre_table, project
from .quadrature import adaptive_gauss_legendre
from .sources import SourceConfig, collided_response, split_response, support_half_width, uncollided_flux
from .stats import DEFAULT_PERCENTILES, direct_moments, empirical_quantiles, quantile_oracle, sobol_sequence

__all__ = [
    "Table",
    "StudyConfig",
    "STUDY_KINDS",
    "spatial_grid",
    "mass_analytic",
    "mass_numeric",
    "collided_mass",
    "uncollided_mass",
    "mass_expansion",
    "run_profiles",
    "run_variance_convergence",
    "run_quantile_convergence",
    "run_mass_study",
    "run_study",
]

STUDY_KINDS = ("profiles", "variance_convergence", "quantile_convergence", "mass_vs_cbar")


@dataclass(frozen=True)
class Table:
    """Named columns over a 2-D float array, one row per grid point."""

    columns: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "columns", tuple(self.columns))

    def __len__(self):
        return len(self.data)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.data:
            buf.write(",".join(f"{v:.16e}" for v in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        lines = text.strip().splitlines()
        cols = lines[0].split(",")
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        return cls(tuple(cols), data.reshape(-1, len(cols)))


@dataclass(frozen=True)
class StudyConfig:
    """Everything needed to reproduce one study; flat so it serialises as JSON.

    The uncertainty is ``omega1`` if given, otherwise ``relative_width * c``
    (the mass study applies the fraction at every point of ``cbar_grid``).
    """

    study: str = "profiles"
    source: SourceConfig = field(default_factory=SourceConfig.plane)
    cbar: float = 1.0
    omega1: float | None = None
    relative_width: float | None = 0.1
    times: tuple[float, ...] = (1.0, 5.0)
    points: int = 201
    positions: tuple[float, ...] | None = None
    order: int = 6
    orders: tuple[int, ...] = tuple(range(1, 9))
    n_samples: int = 1_000_000
    sample_sizes: tuple[int, ...] = (100, 1_000, 10_000, 100_000, 1_000_000)
    percentiles: tuple[float, ...] = (0.05, 0.25, 0.5, 0.75, 0.95)
    position: float = 0.0
    cbar_grid: tuple[float, ...] = tuple(np.round(np.arange(0.4, 1.4001, 0.05), 2))
    check_aliasing: bool = True

    def __post_init__(self):
        if self.study not in STUDY_KINDS:
            raise ValueError(f"unknown study {self.study!r}; expected one of {STUDY_KINDS}")
        if any(not t > 0 for t in self.times):
            raise ValueError("times must be positive")
        if self.source.cylindrical:
            if self.positions is not None and any(r < 0 for r in self.positions):
                raise ValueError("radii must be non-negative for the line source")
            if self.position < 0:
                raise ValueError("radius must be non-negative for the line source")
        if self.omega1 is None and self.relative_width is None:
            raise ValueError("give omega1 or relative_width")
        for name in ("times", "orders", "sample_sizes", "percentiles", "cbar_grid", "positions"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))

    def uncertainty(self, cbar: float | None = None) -> UncertainScatteringRatio:
        cbar = self.cbar if cbar is None else cbar
        if self.omega1 is not None:
            return UncertainScatteringRatio(cbar, self.omega1)
        return UncertainScatteringRatio.relative(cbar, self.relative_width)

    @classmethod
    def defaults(cls, study: str, source: str | SourceConfig = "plane", **overrides) -> "StudyConfig":
        """Default settings for ``study``, with the standard source parameters."""
        if isinstance(source, str):
            source = SourceConfig.default(source)
        base = {
            "profiles": dict(cbar=1.0, relative_width=0.1, times=(1.0, 5.0), order=6),
            "variance_convergence": dict(cbar=1.0, omega1=0.5, relative_width=None, times=(5.0,)),
            "quantile_convergence": dict(
                cbar=1.1, relative_width=0.25, times=(5.0,), order=8, percentiles=tuple(DEFAULT_PERCENTILES)
            ),
            "mass_vs_cbar": dict(relative_width=0.25, times=(3.0,), order=6, percentiles=(0.5,)),
        }[study]
        base.update(overrides)
        return cls(study=study, source=source, **base)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "source":
                out["source"] = value.kind
                out.update({k: v for k, v in value.to_dict().items() if k != "kind"})
            elif isinstance(value, tuple):
                out[f.name] = [v.item() if hasattr(v, "item") else v for v in value]
            else:
                out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        data = dict(data)
        data.pop("notes", None)
        src = {k: data.pop(k) for k in ("x0", "t0", "sigma") if k in data}
        kind = data.pop("source", "plane")
        if isinstance(kind, SourceConfig):
            source = kind
        else:
            source = replace(SourceConfig.default(kind), **src) if src else SourceConfig.default(kind)
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(source=source, **data)

    def manifest(self) -> str:
        record = self.to_dict()
        record["notes"] = _NOTES.get(self.study, "")
        return json.dumps(record, indent=2, sort_keys=False) + "\n"


_NOTES = {
    "mass_vs_cbar": "std is the standard deviation of the mass QoI expansion (not propagated pointwise).",
    "variance_convergence": "rmse is taken over the spatial grid against direct quadrature of E[phi^2]-E[phi]^2.",
    "quantile_convergence": "rmse is taken over the percentile grid against phi(cbar + omega1*(2p-1)).",
    "profiles": "lower/upper are expectation -/+ one standard deviation.",
}


def spatial_grid(cfg: StudyConfig, t: float) -> np.ndarray:
    """Positions for a profile at time ``t``: ``cfg.positions`` or a uniform grid."""
    if cfg.positions is not None:
        return np.asarray(cfg.positions, dtype=float)
    half = support_half_width(cfg.source, t)
    if cfg.source.cylindrical:
        return np.linspace(0.0, half, cfg.points)
    return np.linspace(-half, half, cfg.points)


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def _located(fn, x, t):
    try:
        return fn()
    except Exception as exc:  # noqa: BLE001 - re-raised with the grid point attached
        exc.args = (f"{exc.args[0] if exc.args else exc} (at x={x}, t={t})",) + exc.args[1:]
        raise


# ----------------------------------------------------------------------------
# mass


def mass_analytic(t, c):
    """Total plane-pulse mass ``exp(t (c - 1))``."""
    return np.exp(np.asarray(t, float) * (np.asarray(c, float) - 1.0))


def uncollided_mass(t: float, source: SourceConfig | None = None) -> float:
    """Spatial integral of the uncollided flux."""
    source = source or SourceConfig.plane()
    if source.kind == "plane":
        return 2.0 * t * float(uncollided_plane(0.0, t))
    if source.kind == "line":
        # the r-integral of 2 pi r exp(-t)/(2 pi t sqrt(t^2 - r^2)) is exp(-t)
        return math.exp(-t)
    f = lambda xs: np.array([uncollided_flux(source, x, t) for x in xs])
    return 2.0 * float(adaptive_gauss_legendre(f, 0.0, support_half_width(source, t), order=32, rtol=1e-12))


def collided_mass(t: float, c, source: SourceConfig | None = None, rtol: float = 1e-12):
    """Spatial integral of the collided flux, vectorised over ``c``."""
    source = source or SourceConfig.plane()
    cv = np.atleast_1d(np.asarray(c, dtype=float))
    if source.kind == "plane":
        f = lambda eta: collided_plane_matrix(eta * t, t, cv)
        value = 2.0 * t * adaptive_gauss_legendre(f, 0.0, 1.0, order=32, rtol=rtol, atol=1e-300)
    elif source.kind == "line":
        f = lambda rs: np.stack([2.0 * math.pi * r * line_collided_cloud(r, t)(cv) for r in rs], axis=-1)
        value = adaptive_gauss_legendre(f, 0.0, t, order=32, rtol=rtol, atol=1e-300)
    else:
        f = lambda xs: np.stack([collided_response(source, x, t)(cv) for x in xs], axis=-1)
        value = 2.0 * adaptive_gauss_legendre(f, 0.0, support_half_width(source, t), order=32, rtol=rtol, atol=1e-300)
    return float(value[0]) if np.ndim(c) == 0 else value


def mass_numeric(t: float, c, source: SourceConfig | None = None):
    """Total mass by spatial quadrature of the flux over its support."""
    return uncollided_mass(t, source) + collided_mass(t, c, source)


def mass_expansion(t: float, uncertainty: UncertainScatteringRatio, order: int = 6,
                   source: SourceConfig | None = None, check_aliasing: bool = True) -> ChaosExpansion:
    """Chaos expansion of the total mass as a quantity of interest."""
    source = source or SourceConfig.plane()
    return project(
        lambda th: collided_mass(t, uncertainty.realize(th), source),
        order,
        uncollided_offset=uncollided_mass(t, source),
        check_aliasing=check_aliasing,
        time=t,
        source=source,
        uncertainty=uncertainty,
    )


# ----------------------------------------------------------------------------
# studies


class _Samples:
    """Legendre table of the Sobol points, shared by all expansions of a run."""

    def __init__(self, n: int, order: int):
        self.n = n
        self.table = legendre_table(order, sobol_sequence(n))

    def quantiles(self, exp: ChaosExpansion, grid):
        return empirical_quantiles(exp, self.n, grid, samples=self.table).values


def _pcol(p: float) -> str:
    return f"q{p:g}"


def run_profiles(cfg: StudyConfig, workers: int = 1) -> Table:
    """Moments and percentiles of the flux across space at each time.

    Columns: ``x, t, expectation, std, lower, upper`` followed by one
    ``q<p>`` column per requested percentile.
    """
    unc = cfg.uncertainty()
    samples = _Samples(cfg.n_samples, cfg.order)
    cols = ("x", "t", "expectation", "std", "lower", "upper") + tuple(_pcol(p) for p in cfg.percentiles)
    rows = []
    for t in cfg.times:
        def row(x, t=t):
            exp = _located(lambda: expand(cfg.source, x, t, unc, cfg.order, check_aliasing=cfg.check_aliasing), x, t)
            mean, sd = exp.expectation(), math.sqrt(exp.variance())
            q = samples.quantiles(exp, cfg.percentiles)
            return [x, t, mean, sd, mean - sd, mean + sd, *q]

        rows.extend(_map(row, spatial_grid(cfg, t), workers))
    return Table(cols, np.array(rows))


def run_variance_convergence(cfg: StudyConfig, workers: int = 1) -> Table:
    """RMSE over space of the expansion variance for each order in ``cfg.orders``."""
    unc = cfg.uncertainty()
    t = cfg.times[0]
    if unc.half_width == 0.0:
        # no uncertainty: both variances vanish identically
        return Table(("N", "rmse"), np.column_stack([cfg.orders, np.zeros(len(cfg.orders))]))

    def errors(x):
        def work():
            response = collided_response(cfg.source, x, t)
            fn = lambda th: response(unc.realize(th))
            ref = direct_moments(fn)[1]
            return [project(fn, n, check_aliasing=cfg.check_aliasing).variance() - ref for n in cfg.orders]

        return _located(work, x, t)

    err = np.array(_map(errors, spatial_grid(cfg, t), workers))
    rmse = np.sqrt(np.mean(err**2, axis=0))
    return Table(("N", "rmse"), np.column_stack([cfg.orders, rmse]))


def run_quantile_convergence(cfg: StudyConfig, workers: int = 1) -> Table:
    """RMSE over the percentile grid of sampled quantiles vs the exact ones.

    Columns: ``n_samples, rmse, median_error``.
    """
    unc = cfg.uncertainty()
    t, x = cfg.times[0], cfg.position
    exp = expand(cfg.source, x, t, unc, cfg.order, check_aliasing=cfg.check_aliasing)
    offset, response = split_response(cfg.source, x, t)
    grid = np.asarray(cfg.percentiles)
    exact = quantile_oracle(lambda c: offset + response(c), unc, grid)
    exact_median = quantile_oracle(lambda c: offset + response(c), unc, 0.5)

    def row(n):
        est = empirical_quantiles(exp, n, grid).values
        med = empirical_quantiles(exp, n, [0.5]).values[0]
        return [n, math.sqrt(np.mean((est - exact) ** 2)), abs(med - exact_median)]

    return Table(("n_samples", "rmse", "median_error"), np.array(_map(row, cfg.sample_sizes, workers)))


def run_mass_study(cfg: StudyConfig, workers: int = 1) -> Table:
    """Nominal, expected, +-1 sigma and median mass against the mean ratio.

    Columns: ``cbar, nominal, expectation, std, lower, upper, median``.
    """
    t = cfg.times[0]
    samples = _Samples(cfg.n_samples, cfg.order)

    def row(cbar):
        unc = cfg.uncertainty(cbar)
        exp = _located(lambda: mass_expansion(t, unc, cfg.order, cfg.source, cfg.check_aliasing), cbar, t)
        if cfg.source.kind == "plane":
            nominal = float(mass_analytic(t, cbar))
        else:
            nominal = float(mass_numeric(t, cbar, cfg.source))
        mean, sd = exp.expectation(), math.sqrt(exp.variance())
        median = samples.quantiles(exp, [0.5])[0]
        return [cbar, nominal, mean, sd, mean - sd, mean + sd, median]

    cols = ("cbar", "nominal", "expectation", "std", "lower", "upper", "median")
    return Table(cols, np.array(_map(row, cfg.cbar_grid, workers)))


_RUNNERS = {
    "profiles": run_profiles,
    "variance_convergence": run_variance_convergence,
    "quantile_convergence": run_quantile_convergence,
    "mass_vs_cbar": run_mass_study,
}


def run_study(cfg: StudyConfig, workers: int = 1) -> Table:
    return _RUNNERS[cfg.study](cfg, workers)
