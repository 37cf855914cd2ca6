"""Numerical integration: Mahler measures and the boundary regulator integral."""

from .engine import QuadratureConfig, QuadratureResult, integrate_box
from .mahler import (
    RootFindingError,
    deninger_gamma_check,
    mahler_measure,
    univariate_mahler,
)
from .boundary import (
    BoundaryChart,
    boundary_chart_solve,
    regulator_boundary_integral,
)

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "integrate_box",
    "univariate_mahler",
    "mahler_measure",
    "deninger_gamma_check",
    "RootFindingError",
    "BoundaryChart",
    "boundary_chart_solve",
    "regulator_boundary_integral",
]
