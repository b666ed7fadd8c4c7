"""Deformation quantization of the Pais-Uhlenbeck fourth-order oscillator.

Exact Moyal-star algebra, linear canonical maps, Wigner functions and the
position-space eigenfunctions reached by three independent routes.
"""

from .errors import (
    ConfigError,
    DivergentIntegralError,
    ExactnessError,
    NodeAtOriginError,
    NonNormalizableError,
    PUDQError,
    SignatureMismatchError,
    SingularParametersError,
    UnderResolvedError,
)
from .pumodel import PUParams
from .quadrature import QuadratureSpec

__version__ = "0.1.0"

__all__ = [
    "PUParams",
    "QuadratureSpec",
    "PUDQError",
    "ConfigError",
    "DivergentIntegralError",
    "ExactnessError",
    "NodeAtOriginError",
    "NonNormalizableError",
    "SignatureMismatchError",
    "SingularParametersError",
    "UnderResolvedError",
    "__version__",
]
