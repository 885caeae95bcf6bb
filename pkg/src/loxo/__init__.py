"""Mercator and pseudosphere charts, torsionful frame connections, loxodromes
as auto-parallel curves, and the Fisher-Rao geometry of the normal family."""

from .errors import DomainError, NumericError, PreconditionError, QuadratureError, UnsupportedProjectionError
from .geometry import ChartId, Point2, Vielbein2

__version__ = "0.1.0"

__all__ = [
    "ChartId",
    "DomainError",
    "NumericError",
    "Point2",
    "PreconditionError",
    "QuadratureError",
    "UnsupportedProjectionError",
    "Vielbein2",
]
