from .catalog import CATALOG, CatalogError, canonical_q, make_catalog
from .expr import AdmissibilityError, Expr
from .function import (
    BandlimitedFunction,
    DivergentNormError,
    EvaluationRangeError,
    conjugate,
    differentiate,
    evaluate,
    linear_combination,
    normalize,
)
from .polynomial import Polynomial

__all__ = [
    "CATALOG", "CatalogError", "canonical_q", "make_catalog", "AdmissibilityError", "Expr",
    "BandlimitedFunction", "DivergentNormError", "EvaluationRangeError", "conjugate",
    "differentiate", "evaluate", "linear_combination", "normalize", "Polynomial",
]
