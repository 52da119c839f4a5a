"""Polynomials with ascending coefficients and cached zeros."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_DEGREE = 4


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum(c[k] * z**k)``.

    When built with :meth:`from_roots` the factored form is kept and used for
    evaluation, so the polynomial vanishes exactly at its stored roots.
    """

    coefficients: tuple[complex, ...]
    known_roots: tuple[complex, ...] | None = field(default=None, compare=False)
    lead: complex = field(default=1.0, compare=False)

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "Polynomial":
        roots = tuple(complex(r) for r in roots)
        coeffs = np.array([1.0 + 0j])
        for r in roots:
            # multiply by (z - r), ascending order
            coeffs = np.concatenate([[0j], coeffs]) - r * np.concatenate([coeffs, [0j]])
        coeffs = coeffs * lead
        return cls(tuple(coeffs), known_roots=roots, lead=complex(lead))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        return cls.from_roots([0.0] * k, lead=c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.known_roots is not None:
            out = np.full(z.shape, self.lead, dtype=complex)
            for r in self.known_roots:
                out = out * (z - r)
            return out
        out = np.zeros(z.shape, dtype=complex)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out

    def derivative(self) -> "Polynomial | None":
        """Derivative, or None when it is identically zero."""
        if self.degree == 0:
            return None
        return Polynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.known_roots is not None and other.known_roots is not None:
            return Polynomial.from_roots(self.known_roots + other.known_roots, self.lead * other.lead)
        return Polynomial(tuple(np.convolve(self.coefficients, other.coefficients)))

    def __neg__(self) -> "Polynomial":
        if self.known_roots is not None:
            return Polynomial.from_roots(self.known_roots, -self.lead)
        return Polynomial(tuple(-c for c in self.coefficients))

    def scaled(self, c: complex) -> "Polynomial":
        if self.known_roots is not None:
            return Polynomial.from_roots(self.known_roots, self.lead * c)
        return Polynomial(tuple(c * a for a in self.coefficients))

    def conjugate(self) -> "Polynomial":
        if self.known_roots is not None:
            return Polynomial.from_roots([np.conj(r) for r in self.known_roots], np.conj(self.lead))
        return Polynomial(tuple(np.conj(c) for c in self.coefficients))

    @cached_property
    def roots(self) -> tuple[complex, ...]:
        """Zeros with multiplicity (repeated entries)."""
        if self.known_roots is not None:
            return self.known_roots
        if self.degree > MAX_DEGREE:
            raise ValueError(f"degree {self.degree} > {MAX_DEGREE} not supported")
        if self.degree == 0:
            return ()
        raw = np.roots(self.coefficients[::-1])
        # Newton polish on the companion eigenvalues
        d = self.derivative()
        polished = []
        for r in raw:
            for _ in range(4):
                dv = d(r)
                if dv == 0:
                    break
                step = self(r) / dv
                if not np.isfinite(step):
                    break
                r = r - step
            polished.append(complex(r))
        return tuple(sorted(polished, key=lambda w: (w.real, w.imag)))

    def root_clusters(self, tol: float = 1e-7) -> list[tuple[complex, int]]:
        """Distinct zeros with multiplicities; zeros closer than ``tol`` merge."""
        out: list[list] = []
        for r in self.roots:
            for c in out:
                if abs(c[0] - r) <= tol * (1 + abs(r)):
                    c[0] = (c[0] * c[1] + r) / (c[1] + 1)
                    c[1] += 1
                    break
            else:
                out.append([r, 1])
        return [(complex(c), m) for c, m in out]

    def to_list(self) -> list:
        return [[c.real, c.imag] for c in self.coefficients]
