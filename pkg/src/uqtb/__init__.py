"""Uncertainty-quantified benchmark solutions for time-dependent transport.

Infinite-medium, isotropic-scattering pulse and finite-source problems with
an uncertain scattering ratio, propagated by Legendre polynomial chaos.
"""

from .errors import ConvergenceError, DomainError, MonotonicityError
from .kernels import (
    FluxValue,
    SimilarityPoint,
    collided_plane,
    line_source_flux,
    point_source_flux,
    uncollided_plane,
)
from .sources import SourceConfig, source_flux
from .pce import ChaosExpansion, UncertainScatteringRatio, expand, project
from .stats import QuantileTable, empirical_quantiles, quantile_oracle
from .bench import StudyConfig, Table, run_study

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "MonotonicityError",
    "FluxValue",
    "SimilarityPoint",
    "collided_plane",
    "uncollided_plane",
    "point_source_flux",
    "line_source_flux",
    "SourceConfig",
    "source_flux",
    "ChaosExpansion",
    "UncertainScatteringRatio",
    "expand",
    "project",
    "QuantileTable",
    "empirical_quantiles",
    "quantile_oracle",
    "StudyConfig",
    "Table",
    "run_study",
]
