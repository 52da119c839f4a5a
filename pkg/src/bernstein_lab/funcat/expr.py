"""Expression trees for entire functions of exponential type.

Every node evaluates on numpy arrays of complex points, knows its exact
derivative, its conjugate ``e*(z) = conj(e(conj z))``, its exponential type
and its algebraic decay order along horizontal lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .polynomial import Polynomial

# points closer than GUARD_REL*(1+|z|) to a denominator zero use the Cauchy formula
GUARD_REL = 1e-4
CAUCHY_NODES = 32
MIN_CIRCLE = 0.05


class AdmissibilityError(ValueError):
    """A polynomial denominator has a zero that the numerator does not cancel."""


class Expr:
    """Base node. Subclasses are frozen dataclasses, hence hashable."""

    def ev(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def deriv(self) -> "Expr":
        raise NotImplementedError

    def conj(self) -> "Expr":
        raise NotImplementedError

    @property
    def etype(self) -> float:
        raise NotImplementedError

    @property
    def decay(self) -> float:
        raise NotImplementedError

    @property
    def feature_radius(self) -> float:
        return 0.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return self.ev(z)


def is_zero(e: Expr) -> bool:
    return isinstance(e, Constant) and e.c == 0


def add(a: Expr, b: Expr) -> Expr:
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.c + b.c)
    return Sum(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if is_zero(a) or is_zero(b):
        return Constant(0)
    if isinstance(a, Constant) and a.c == 1:
        return b
    if isinstance(b, Constant) and b.c == 1:
        return a
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.c * b.c)
    if isinstance(b, Constant):
        a, b = b, a
    if isinstance(a, Constant) and isinstance(b, Product) and isinstance(b.left, Constant):
        return mul(Constant(a.c * b.left.c), b.right)
    return Product(a, b)


def scale(c: complex, e: Expr) -> Expr:
    return mul(Constant(c), e)


def poly_factor(e: Expr, p: Polynomial | None) -> Expr:
    if p is None or is_zero(e):
        return Constant(0)
    if p.degree == 0:
        return scale(p.coefficients[0], e)
    return PolyFactor(e, p)


def sine(a: float) -> Expr:
    """sin(a z) written as a shifted cosine."""
    if a == 0:
        return Constant(0)
    return Shift(CosScaled(a), math.pi / (2 * a))


@dataclass(frozen=True)
class Constant(Expr):
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def ev(self, z):
        return np.full(np.shape(z), self.c, dtype=complex)

    def deriv(self):
        return Constant(0)

    def conj(self):
        return Constant(np.conj(self.c))

    @property
    def etype(self):
        return 0.0

    @property
    def decay(self):
        return math.inf if self.c == 0 else 0.0

    def __str__(self):
        c = self.c
        return f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}i)"


@dataclass(frozen=True)
class CosScaled(Expr):
    """cos(a z)."""

    a: float

    def ev(self, z):
        return np.cos(self.a * z)

    def deriv(self):
        if self.a == 0:
            return Constant(0)
        return scale(self.a, Shift(CosScaled(self.a), -math.pi / (2 * self.a)))

    def conj(self):
        return self

    @property
    def etype(self):
        return abs(self.a)

    @property
    def decay(self):
        return 0.0

    def __str__(self):
        return f"cos({self.a:g}z)"


def _sph_ratio(u: np.ndarray, n: int) -> np.ndarray:
    """j_n(w)/w**n with w = sqrt(u); entire and even in w."""
    w = np.sqrt(u)
    out = np.empty(u.shape, dtype=complex)
    small = np.abs(w) < n + 4
    if np.any(small):
        us = u[small]
        term = np.full(us.shape, 1.0 / _double_factorial(2 * n + 1), dtype=complex)
        acc = term.copy()
        for m in range(60):
            term = term * (-us / 2) / ((m + 1) * (2 * m + 2 * n + 3))
            acc = acc + term
        out[small] = acc
    big = ~small
    if np.any(big):
        wb = w[big]
        j_prev = np.sin(wb) / wb
        if n == 0:
            jn = j_prev
        else:
            j_cur = np.sin(wb) / wb**2 - np.cos(wb) / wb
            for m in range(1, n):
                j_prev, j_cur = j_cur, (2 * m + 1) / wb * j_cur - j_prev
            jn = j_cur
        out[big] = jn / wb**n
    return out


def _double_factorial(k: int) -> float:
    return float(math.prod(range(k, 0, -2))) if k > 0 else 1.0


@dataclass(frozen=True)
class CosSqrtShift(Expr):
    """cos(sqrt((a z)^2 + eps^2)) and, for ``order`` k > 0, its k-th derivative
    with respect to u = (a z)^2 + eps^2, composed with u(z)."""

    a: float
    eps: float
    order: int = 0

    def ev(self, z):
        u = (self.a * z) ** 2 + self.eps**2
        if self.order == 0:
            return np.cos(np.sqrt(u))
        k = self.order
        return (-0.5) ** k * _sph_ratio(u, k - 1)

    def deriv(self):
        if self.a == 0:
            return Constant(0)
        return PolyFactor(CosSqrtShift(self.a, self.eps, self.order + 1),
                          Polynomial.from_roots([0.0], 2 * self.a**2))

    def conj(self):
        return self

    @property
    def etype(self):
        return abs(self.a)

    @property
    def decay(self):
        return float(self.order)

    def __str__(self):
        base = f"cos(sqrt(({self.a:g}z)^2+{self.eps:g}^2))"
        return base if self.order == 0 else f"D_u^{self.order}[{base}]"


@dataclass(frozen=True)
class ExpLine(Expr):
    """exp(i a z)."""

    a: float

    def ev(self, z):
        return np.exp(1j * self.a * z)

    def deriv(self):
        return scale(1j * self.a, self)

    def conj(self):
        return ExpLine(-self.a)

    @property
    def etype(self):
        return abs(self.a)

    @property
    def decay(self):
        return 0.0

    def __str__(self):
        return f"exp(i{self.a:g}z)"


@dataclass(frozen=True)
class SincKernel(Expr):
    """sin(s z) / (pi z)."""

    s: float

    def ev(self, z):
        w = self.s * z
        out = np.empty(np.shape(z), dtype=complex)
        small = np.abs(w) < 1e-3
        ws = w[small]
        out[small] = (self.s / math.pi) * (1 - ws**2 / 6 + ws**4 / 120)
        big = ~small
        out[big] = np.sin(w[big]) / (math.pi * z[big])
        return out

    def as_quotient(self) -> "PolyQuotient":
        return PolyQuotient(scale(1 / math.pi, sine(self.s)), Polynomial.from_roots([0.0]), check=False)

    def deriv(self):
        if self.s == 0:
            return Constant(0)
        return self.as_quotient().deriv()

    def conj(self):
        return self

    @property
    def etype(self):
        return abs(self.s)

    @property
    def decay(self):
        return 1.0

    def __str__(self):
        return f"sin({self.s:g}z)/(pi z)"


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr

    def ev(self, z):
        return self.left.ev(z) + self.right.ev(z)

    def deriv(self):
        return add(self.left.deriv(), self.right.deriv())

    def conj(self):
        return Sum(self.left.conj(), self.right.conj())

    @property
    def etype(self):
        return max(self.left.etype, self.right.etype)

    @property
    def decay(self):
        return min(self.left.decay, self.right.decay)

    @property
    def feature_radius(self):
        return max(self.left.feature_radius, self.right.feature_radius)

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr

    def ev(self, z):
        return self.left.ev(z) * self.right.ev(z)

    def deriv(self):
        return add(mul(self.left.deriv(), self.right), mul(self.left, self.right.deriv()))

    def conj(self):
        return Product(self.left.conj(), self.right.conj())

    @property
    def etype(self):
        return self.left.etype + self.right.etype

    @property
    def decay(self):
        return self.left.decay + self.right.decay

    @property
    def feature_radius(self):
        return max(self.left.feature_radius, self.right.feature_radius)

    def __str__(self):
        return f"{self.left}*{self.right}"


def _poly_str(p: Polynomial) -> str:
    if p.known_roots is not None:
        lead = "" if p.lead == 1 else f"{Constant(p.lead)}"
        return lead + "".join(f"(z-{Constant(r)})" for r in p.known_roots)
    return "poly" + str([Constant(c).__str__() for c in p.coefficients])


@dataclass(frozen=True)
class PolyFactor(Expr):
    expr: Expr
    p: Polynomial

    def ev(self, z):
        return self.expr.ev(z) * self.p(z)

    def deriv(self):
        return add(poly_factor(self.expr.deriv(), self.p), poly_factor(self.expr, self.p.derivative()))

    def conj(self):
        return PolyFactor(self.expr.conj(), self.p.conjugate())

    @property
    def etype(self):
        return self.expr.etype

    @property
    def decay(self):
        return self.expr.decay - self.p.degree

    @property
    def feature_radius(self):
        r = max((abs(w) for w in self.p.roots), default=0.0)
        return max(self.expr.feature_radius, r)

    def __str__(self):
        return f"{self.expr}*{_poly_str(self.p)}"


@dataclass(frozen=True)
class PolyQuotient(Expr):
    """expr / q with every zero of q removable.

    Points near a zero of q are evaluated through the Cauchy integral of the
    quotient over a circle enclosing that zero's cluster.
    """

    expr: Expr
    q: Polynomial
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.check:
            self._check_admissible()

    @cached_property
    def _clusters(self) -> list[tuple[complex, float, float]]:
        """(center, cluster radius, circle radius) for grouped zeros of q."""
        roots = list(self.q.roots)
        groups: list[list[complex]] = []
        for r in roots:
            for g in groups:
                if min(abs(r - s) for s in g) <= 2 * MIN_CIRCLE:
                    g.append(r)
                    break
            else:
                groups.append([r])
        # merge transitively
        merged = True
        while merged:
            merged = False
            for i in range(len(groups)):
                for j in range(i + 1, len(groups)):
                    if min(abs(a - b) for a in groups[i] for b in groups[j]) <= 2 * MIN_CIRCLE:
                        groups[i] += groups.pop(j)
                        merged = True
                        break
                if merged:
                    break
        out = []
        for g in groups:
            c = complex(np.mean(g))
            crad = max(abs(r - c) for r in g)
            rho = GUARD_REL * (1 + abs(c))
            r = max(4 * (rho + crad), MIN_CIRCLE)
            others = [abs(s - c) for h in groups if h is not g for s in h]
            if others:
                r = min(r, 0.45 * min(others))
            out.append((c, crad + rho, r))
        return out

    def _direct(self, z):
        return self.expr.ev(z) / self.q(z)

    def _cauchy(self, z, center, radius):
        theta = 2 * math.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES
        zeta = center + radius * np.exp(1j * theta)
        vals = self._direct(zeta)
        kern = (zeta - center)[None, :] / (zeta[None, :] - z[:, None])
        return (kern * vals[None, :]).mean(axis=1)

    def ev(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        flat = z.reshape(-1)
        res = out.reshape(-1)
        pending = np.ones(flat.shape, dtype=bool)
        for c, guard, r in self._clusters:
            near = pending & (np.abs(flat - c) <= guard)
            if np.any(near):
                res[near] = self._cauchy(flat[near], c, r)
                pending &= ~near
        if np.any(pending):
            res[pending] = self._direct(flat[pending])
        return out

    def _check_admissible(self, rtol: float = 1e-8):
        for center, mult in self.q.root_clusters():
            r = MIN_CIRCLE
            theta = 2 * math.pi * np.arange(64) / 64
            zeta = center + r * np.exp(1j * theta)
            with np.errstate(all="ignore"):
                vals = self.expr.ev(zeta)
            scale_ = max(float(np.max(np.abs(vals))), 1e-300)
            for j in range(mult):
                # Taylor coefficient j of the numerator at the zero
                coef = np.mean(vals * np.exp(-1j * j * theta)) / r**j
                if abs(coef) * r**j > rtol * scale_:
                    raise AdmissibilityError(
                        f"denominator zero {center:.6g} (multiplicity {mult}) is not a zero "
                        f"of order {mult} of the numerator"
                    )

    def deriv(self):
        qd = self.q.derivative()
        num = add(poly_factor(self.expr.deriv(), self.q), scale(-1, poly_factor(self.expr, qd)))
        if is_zero(num):
            return Constant(0)
        return PolyQuotient(num, self.q * self.q, check=False)

    def conj(self):
        return PolyQuotient(self.expr.conj(), self.q.conjugate(), check=False)

    @property
    def etype(self):
        return self.expr.etype

    @property
    def decay(self):
        return self.expr.decay + self.q.degree

    @property
    def feature_radius(self):
        r = max((abs(w) for w in self.q.roots), default=0.0)
        return max(self.expr.feature_radius, r)

    def __str__(self):
        return f"[{self.expr}]/[{_poly_str(self.q)}]"


@dataclass(frozen=True)
class Shift(Expr):
    """expr(z - t)."""

    expr: Expr
    t: complex

    def __post_init__(self):
        object.__setattr__(self, "t", complex(self.t))

    def ev(self, z):
        return self.expr.ev(z - self.t)

    def deriv(self):
        d = self.expr.deriv()
        return Constant(0) if is_zero(d) else Shift(d, self.t)

    def conj(self):
        return Shift(self.expr.conj(), np.conj(self.t))

    @property
    def etype(self):
        return self.expr.etype

    @property
    def decay(self):
        return self.expr.decay

    @property
    def feature_radius(self):
        return self.expr.feature_radius + abs(self.t)

    def __str__(self):
        return f"{self.expr}|z->z-{Constant(self.t)}"


@dataclass(frozen=True)
class IntegerPower(Expr):
    expr: Expr
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("power must be >= 1")

    def ev(self, z):
        return self.expr.ev(z) ** self.k

    def deriv(self):
        inner = self.expr if self.k == 2 else IntegerPower(self.expr, self.k - 1)
        if self.k == 1:
            return self.expr.deriv()
        return mul(scale(self.k, inner), self.expr.deriv())

    def conj(self):
        return IntegerPower(self.expr.conj(), self.k)

    @property
    def etype(self):
        return self.k * self.expr.etype

    @property
    def decay(self):
        return self.k * self.expr.decay

    @property
    def feature_radius(self):
        return self.expr.feature_radius

    def __str__(self):
        return f"({self.expr})^{self.k}"
