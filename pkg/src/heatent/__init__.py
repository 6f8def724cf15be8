"""Entropy and entropy-rate of heat flow on model manifolds."""

from . import bounds, fixtures, h3entropy, spectral, verify
from .logscale import LogScaled
from .quadrature import (
    QuadratureConvergenceError,
    QuadratureDomainError,
    QuadratureResult,
    QuadratureSpec,
    integrate_semi_infinite,
    integrate_shifted_gaussian,
)

__all__ = [
    "LogScaled",
    "QuadratureConvergenceError",
    "QuadratureDomainError",
    "QuadratureResult",
    "QuadratureSpec",
    "bounds",
    "fixtures",
    "h3entropy",
    "integrate_semi_infinite",
    "integrate_shifted_gaussian",
    "spectral",
    "verify",
]
