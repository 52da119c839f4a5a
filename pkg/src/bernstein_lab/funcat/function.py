"""The unit-ball citizen: an expression with a nominal type and a scalar."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .expr import Constant, Expr, add, scale

log = logging.getLogger(__name__)


class EvaluationRangeError(OverflowError):
    """Evaluation overflowed (typically |Im z| too large)."""


class DivergentNormError(ArithmeticError):
    """The L1 norm on the real line does not converge."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class BandlimitedFunction:
    expr: Expr
    sigma_nominal: float
    alpha: complex = 1.0
    name: str = "anonymous"
    params: tuple = field(default=())

    def __post_init__(self):
        if not self.sigma_nominal > 0:
            raise ValueError("sigma_nominal must be positive")
        object.__setattr__(self, "alpha", complex(self.alpha))

    def __call__(self, z):
        return evaluate(self, z)

    def values(self, z) -> np.ndarray:
        """Vectorized evaluation without range checks (quadrature hot path)."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return self.alpha * self.expr.ev(z)

    @property
    def decay(self) -> float:
        return self.expr.decay

    @property
    def feature_radius(self) -> float:
        return self.expr.feature_radius

    def with_alpha(self, alpha: complex) -> "BandlimitedFunction":
        return replace(self, alpha=complex(alpha))

    def scaled(self, c: complex) -> "BandlimitedFunction":
        return replace(self, alpha=self.alpha * c)

    def descriptor(self) -> dict:
        """Canonical structured record: name, parameters, alpha."""
        return {
            "name": self.name,
            "params": {k: _plain(v) for k, v in self.params},
            "alpha": [float(f"{self.alpha.real:.15g}"), float(f"{self.alpha.imag:.15g}")],
            "sigma": float(f"{self.sigma_nominal:.15g}"),
        }

    def __str__(self):
        return f"{self.name}: {Constant(self.alpha)}*{self.expr}"


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag] if v.imag else v.real
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, BandlimitedFunction):
        return v.descriptor()
    if isinstance(v, float):
        return float(f"{v:.15g}")
    return v


def evaluate(f: BandlimitedFunction, z):
    """alpha * expr(z); scalar in, scalar out."""
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    out = f.values(zz)
    bad = ~np.isfinite(out) & np.isfinite(zz)
    if np.any(bad):
        raise EvaluationRangeError(f"{f.name}: evaluation overflow at z={zz[bad][0]}")
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def conjugate(f: BandlimitedFunction) -> BandlimitedFunction:
    return BandlimitedFunction(f.expr.conj(), f.sigma_nominal, np.conj(f.alpha),
                               f"conj({f.name})", f.params)


def differentiate(f: BandlimitedFunction, order: int = 1) -> BandlimitedFunction:
    e = f.expr
    for _ in range(order):
        e = e.deriv()
    tag = "d/dz" if order == 1 else f"d^{order}/dz^{order}"
    return BandlimitedFunction(e, f.sigma_nominal, f.alpha, f"{tag}({f.name})", f.params)


def linear_combination(terms, name: str = "combination") -> BandlimitedFunction:
    """sum(c * f) over (c, f) pairs, alpha folded into the expression."""
    expr: Expr = Constant(0)
    sigma = 0.0
    for c, f in terms:
        expr = add(expr, scale(c * f.alpha, f.expr))
        sigma = max(sigma, f.sigma_nominal)
    return BandlimitedFunction(expr, sigma, 1.0, name)


def normalize(f: BandlimitedFunction, quad=None) -> BandlimitedFunction:
    """Return f with a positive real alpha giving unit L1 norm on the real line."""
    from ..quad import QuadratureConfig, abs_integral_on_line

    quad = quad or QuadratureConfig()
    base = f.with_alpha(1.0)
    res = abs_integral_on_line(base, 0.0, quad)
    if res.diagnostic.get("status") == "diverged" or not math.isfinite(res.value):
        raise DivergentNormError(f"{f.name}: L1 norm does not converge ({res.diagnostic})", res)
    if not res.converged:
        log.warning("%s: norm error estimate %.3g above tolerance", f.name, res.error_estimate)
    if res.value <= 0:
        raise ArithmeticError(f"{f.name}: zero norm cannot be normalized")
    return f.with_alpha(1.0 / res.value)
