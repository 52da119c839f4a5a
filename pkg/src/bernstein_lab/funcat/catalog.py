"""Named constructions, built unnormalized exactly as displayed."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .expr import (
    AdmissibilityError,
    Constant,
    CosScaled,
    CosSqrtShift,
    ExpLine,
    IntegerPower,
    PolyFactor,
    PolyQuotient,
    Product,
    Shift,
    SincKernel,
    Sum,
    scale,
    sine,
)
from .function import BandlimitedFunction, evaluate
from .polynomial import Polynomial

PI = math.pi


class CatalogError(ValueError):
    """Unknown entry or parameters outside the admissible range."""


def _params(**kw) -> tuple:
    return tuple(sorted(kw.items()))


def two_cos_minus_one(sigma: float = PI) -> BandlimitedFunction:
    """Sine-type F(z) = 2 cos(sigma z) - 1."""
    expr = Sum(scale(2.0, CosScaled(sigma)), Constant(-1.0))
    return BandlimitedFunction(expr, sigma, 1.0, "two_cos_minus_one", _params(sigma=sigma))


def example34_F(sigma: float = PI, eps: float = 1.0) -> BandlimitedFunction:
    """Sine-type cos(sigma z/2) cos(sqrt((sigma z/2)^2 + eps^2))."""
    expr = Product(CosScaled(sigma / 2), CosSqrtShift(sigma / 2, eps))
    return BandlimitedFunction(expr, sigma, 1.0, "example34_F", _params(sigma=sigma, eps=eps))


def sinc(sigma: float = PI) -> BandlimitedFunction:
    return BandlimitedFunction(SincKernel(sigma), sigma, 1.0, "sinc", _params(sigma=sigma))


def sine_fn(sigma: float = PI) -> BandlimitedFunction:
    return BandlimitedFunction(sine(sigma), sigma, 1.0, "sine", _params(sigma=sigma))


def exp_line(a: float = PI) -> BandlimitedFunction:
    return BandlimitedFunction(ExpLine(a), abs(a) or 1.0, 1.0, "exp_line", _params(a=a))


def polynomial(roots=(1.0, -1.0), sigma: float = 1.0) -> BandlimitedFunction:
    """Polynomial with the given roots; zero exponential type (sigma is nominal only)."""
    p = Polynomial.from_roots(roots)
    return BandlimitedFunction(PolyFactor(Constant(1.0), p), sigma, 1.0, "polynomial",
                               _params(roots=tuple(complex(r) for r in roots)))


def example34(sigma: float = PI, eps: float = 1.0) -> BandlimitedFunction:
    if not 0 < eps < PI / 2:
        raise CatalogError(f"example34 needs 0 < eps < pi/2, got eps={eps}")
    F = example34_F(sigma, eps)
    q = Polynomial.from_roots([PI / sigma, -PI / sigma], sigma**2)
    return BandlimitedFunction(PolyQuotient(F.expr, q), sigma, 1.0, "example34",
                               _params(sigma=sigma, eps=eps))


def thm46(sigma: float = PI) -> BandlimitedFunction:
    """(2 cos(sigma x) - 1) / ((3 sigma x)^2 - pi^2)."""
    F = two_cos_minus_one(sigma)
    q = Polynomial.from_roots([PI / (3 * sigma), -PI / (3 * sigma)], 9 * sigma**2)
    return BandlimitedFunction(PolyQuotient(F.expr, q), sigma, 1.0, "thm46", _params(sigma=sigma))


def canonical_q(sigma: float, degree: int) -> Polynomial:
    """q of the given degree whose zeros are zeros of 2 cos(sigma z) - 1.

    Zeros are (pi/3sigma)*{1, -1, 5, 7 or -7}, each factor written (3 sigma z - k pi).
    """
    ks = {1: [1], 2: [1, -1], 3: [1, -1, 5], 4: [1, -1, 7, -7]}
    if degree not in ks:
        raise CatalogError(f"canonical q only for degrees 1..4, got {degree}")
    roots = [k * PI / (3 * sigma) for k in ks[degree]]
    return Polynomial.from_roots(roots, (3 * sigma) ** degree)


def sinetype_quotient(F: BandlimitedFunction | str = "two_cos_minus_one", q=None,
                      sigma: float = PI, degree: int | None = None, eps: float = 1.0) -> BandlimitedFunction:
    """alpha F / q; q may be a Polynomial, a list of roots, or chosen canonically by degree."""
    if isinstance(F, str):
        F = two_cos_minus_one(sigma) if F == "two_cos_minus_one" else example34_F(sigma, eps)
    if q is None:
        if degree is None:
            raise CatalogError("sinetype_quotient needs q or degree")
        q = canonical_q(F.sigma_nominal, degree)
    elif not isinstance(q, Polynomial):
        q = Polynomial.from_roots(q)
    try:
        expr = PolyQuotient(F.expr, q)
    except AdmissibilityError as exc:
        raise CatalogError(f"sinetype_quotient: {exc}") from exc
    return BandlimitedFunction(expr, F.sigma_nominal, F.alpha, "sinetype_quotient",
                               _params(F=F.name, q_roots=tuple(q.roots), sigma=F.sigma_nominal))


def prop35_term(f: BandlimitedFunction, x_n: float, y_n: float, a: float = 0.0) -> BandlimitedFunction:
    """(x - a)^2 f(x) / ((x - x_n)(x - y_n)), unnormalized."""
    # f(a) = 0 up to rounding, measured against |f| nearby
    near = np.abs(f.values(a + np.linspace(-1, 1, 33) * PI / f.sigma_nominal)).max()
    if abs(evaluate(f, a)) <= 1e-12 * near:
        raise CatalogError(f"prop35_term needs f(a) != 0, got f({a}) = {evaluate(f, a)}")
    num = PolyFactor(f.expr, Polynomial.from_roots([a, a]))
    try:
        expr = PolyQuotient(num, Polynomial.from_roots([x_n, y_n]))
    except AdmissibilityError as exc:
        raise CatalogError(f"prop35_term: {exc}") from exc
    return BandlimitedFunction(expr, f.sigma_nominal, f.alpha, "prop35_term",
                               _params(f=f.name, x_n=x_n, y_n=y_n, a=a))


def shifted_sinc_sq(sigma: float = PI, n: float = 0.0) -> BandlimitedFunction:
    """g(x - n) with g(x) = (sin(sigma x/2)/x)^2."""
    expr = scale(PI**2, IntegerPower(SincKernel(sigma / 2), 2))
    if n:
        expr = Shift(expr, n)
    return BandlimitedFunction(expr, sigma, 1.0, "shifted_sinc_sq", _params(sigma=sigma, n=n))


CATALOG: dict[str, Callable[..., BandlimitedFunction]] = {
    "example34": example34,
    "thm46": thm46,
    "sinetype_quotient": sinetype_quotient,
    "prop35_term": prop35_term,
    "shifted_sinc_sq": shifted_sinc_sq,
    "sinc": sinc,
    "two_cos_minus_one": two_cos_minus_one,
    "example34_F": example34_F,
    "sine": sine_fn,
    "exp_line": exp_line,
    "polynomial": polynomial,
}


def make_catalog(name: str, params: dict | None = None) -> BandlimitedFunction:
    try:
        builder = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {sorted(CATALOG)}") from None
    try:
        return builder(**(params or {}))
    except TypeError as exc:
        raise CatalogError(f"{name}: bad parameters {params}: {exc}") from exc
