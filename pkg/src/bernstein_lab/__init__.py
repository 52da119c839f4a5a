"""Numerical laboratory for exposed and strongly exposed points of the unit
ball of the Bernstein space B^1_sigma."""

from .funcat import (
    BandlimitedFunction,
    CatalogError,
    DivergentNormError,
    Polynomial,
    conjugate,
    differentiate,
    evaluate,
    make_catalog,
    normalize,
)
from .quad import QuadratureConfig, abs_integral_on_line, interval_mass, pair_integral

__version__ = "0.1.0"

__all__ = [
    "BandlimitedFunction", "CatalogError", "DivergentNormError", "Polynomial", "conjugate", "differentiate",
    "evaluate", "make_catalog", "normalize", "QuadratureConfig", "abs_integral_on_line", "interval_mass",
    "pair_integral", "__version__",
]
