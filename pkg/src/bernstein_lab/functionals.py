"""Dual-side objects: weight kernels, the exposing functional, the sign
Fourier series, the split Phi = I + K, the lowpass projection onto the
band [-sigma, sigma] and the shifted sinc-squared witness sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _gauss
from .funcat import BandlimitedFunction, make_catalog
from .quad import (
    QuadratureConfig,
    fixed_line_integrals,
    integrate_line,
    pair_integral,
)
from .zeros import real_zeros


# weight kernels ------------------------------------------------------------

class WeightKernel:
    """Bounded weight on the real line. Subclasses set ``sup_norm``."""

    sigma: float | None = None
    panel_width: float | None = None
    feature_radius: float = 0.0

    def __call__(self, x):
        raise NotImplementedError

    def breakpoints(self, lo, hi):
        return []


@dataclass(frozen=True)
class Unimodular(WeightKernel):
    """u_f(x) = conj(f(x)) / |f(x)|; nodes on zeros of f are nudged by ``guard``."""

    f: BandlimitedFunction
    guard: float = 1e-4
    sup_norm: float = 1.0

    @property
    def sigma(self):
        return self.f.sigma_nominal

    @property
    def feature_radius(self):
        return self.f.feature_radius

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        v = self.f.values(x)
        bad = np.abs(v) == 0
        if np.any(bad):
            v = np.where(bad, self.f.values(x + self.guard * (1 + np.abs(x))), v)
        return np.conj(v) / np.abs(v)

    def breakpoints(self, lo, hi):
        return real_zeros(self.f, (lo, hi)).real_locations


@dataclass(frozen=True)
class Indicator(WeightKernel):
    lo: float
    hi: float
    scale: complex = 1.0

    @property
    def sup_norm(self):
        return abs(self.scale)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        # panels never straddle the edges, so the closed interval is fine
        return np.where((x >= self.lo) & (x <= self.hi), self.scale, 0.0).astype(complex)

    def breakpoints(self, lo, hi):
        return [t for t in (self.lo, self.hi) if lo < t < hi]


@dataclass(frozen=True)
class ConstantMean(WeightKernel):
    c: complex

    @property
    def sup_norm(self):
        return abs(self.c)

    def __call__(self, x):
        return np.full(np.shape(x), self.c, dtype=complex)


@dataclass(frozen=True)
class TruncatedSignSeries(WeightKernel):
    """sum_{n=1}^N c_n cos(n sigma x), optionally with the constant c0."""

    sigma_base: float
    coeffs: tuple
    c0: float = 0.0

    @property
    def sigma(self):
        return self.sigma_base

    @property
    def panel_width(self):
        # one wavelength of the top harmonic per 20-point panel
        return 2 * math.pi / (self.sigma_base * max(1, len(self.coeffs)))

    @property
    def sup_norm(self):
        x = np.linspace(0, 2 * math.pi / self.sigma_base, 8 * len(self.coeffs) + 64)
        return float(np.max(np.abs(self(x))))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.c0, dtype=float)
        for n, c in enumerate(self.coeffs, start=1):
            if c:
                out += c * np.cos(n * self.sigma_base * x)
        return out.astype(complex)


@dataclass(frozen=True)
class Combination(WeightKernel):
    terms: tuple  # ((coef, kernel), ...)

    @property
    def sigma(self):
        s = [k.sigma for _, k in self.terms if k.sigma]
        return max(s) if s else None

    @property
    def panel_width(self):
        w = [k.panel_width for _, k in self.terms if k.panel_width]
        return min(w) if w else None

    @property
    def sup_norm(self):
        return sum(abs(c) * k.sup_norm for c, k in self.terms)

    def __call__(self, x):
        return sum(c * k(x) for c, k in self.terms)

    def breakpoints(self, lo, hi):
        out = []
        for _, k in self.terms:
            out += list(k.breakpoints(lo, hi))
        return sorted(set(out))


# exposing functional -------------------------------------------------------

def exposing_apply(f: BandlimitedFunction, g: BandlimitedFunction, cfg: QuadratureConfig | None = None) -> complex:
    """Phi_f(g): g paired against the unimodular weight of f."""
    cfg = cfg or QuadratureConfig()
    res = pair_integral(g, Unimodular(f, cfg.pole_guard_radius), cfg)
    if not res.converged:
        raise ArithmeticError(f"pairing {g.name} with u_{f.name} did not converge: {res.diagnostic}")
    return complex(res.value)


# sign Fourier series -------------------------------------------------------

@dataclass(frozen=True)
class FourierCoeffs:
    c0: float
    c: tuple  # c_1 .. c_N
    period: float
    sigma: float

    def partial_sum(self, x, N: int | None = None):
        N = len(self.c) if N is None else N
        n = np.arange(1, N + 1)
        return self.c0 + np.cos(np.multiply.outer(np.asarray(x, dtype=float), n * self.sigma)) @ np.asarray(self.c[:N])

    def to_table(self) -> dict:
        return {"columns": ["n", "value"], "rows": [[0, self.c0]] + [[i + 1, v] for i, v in enumerate(self.c)]}


def sign_fourier_coeffs(sigma: float, N: int) -> FourierCoeffs:
    """Cosine coefficients of sign(2 cos(sigma x) - 1) over one period."""
    if N < 1:
        raise ValueError("N must be >= 1")
    P = 2 * math.pi / sigma
    lo, hi = -P / 2, P / 2
    b = math.pi / (3 * sigma)

    def sgn(x):
        return np.sign(2 * np.cos(sigma * x) - 1)

    def coef(n):
        val, _, _ = _gauss.integrate(lambda x: sgn(x) * np.cos(n * sigma * x), lo, hi, tol=1e-14,
                                     h_max=P / (4 * max(n, 1)), breakpoints=(-b, b))
        return float(val) * (1 if n == 0 else 2) / P

    return FourierCoeffs(coef(0), tuple(coef(n) for n in range(1, N + 1)), P, sigma)


def sign_weight(sigma: float, N: int) -> TruncatedSignSeries:
    """h_sigma truncated at N terms (the series without its constant)."""
    fc = sign_fourier_coeffs(sigma, N)
    return TruncatedSignSeries(sigma, fc.c)


@dataclass(frozen=True)
class Decomposition:
    I: complex
    K: complex
    phi: complex
    residual: float
    N: int


def decompose_phi(f: BandlimitedFunction, g: BandlimitedFunction, N: int = 64,
                  cfg: QuadratureConfig | None = None) -> Decomposition:
    """Split Phi_f(g) = I_f(g) + K_f(g) for the cosine quotient f.

    I_f(g) = -(1/3) int g and K_f(g) = int (h_N - 2 chi) g with chi the
    indicator of [-pi/(3 sigma), pi/(3 sigma)] and h_N the truncated series.
    """
    if N < 8:
        raise ValueError("decompose_phi needs N >= 8")
    cfg = cfg or QuadratureConfig()
    sigma = f.sigma_nominal
    b = math.pi / (3 * sigma)
    I = pair_integral(g, ConstantMean(-1.0 / 3), cfg)
    K = pair_integral(g, Combination(((1.0, sign_weight(sigma, N)), (1.0, Indicator(-b, b, -2.0)))), cfg)
    phi = exposing_apply(f, g, cfg)
    return Decomposition(complex(I.value), complex(K.value), phi, abs(phi - I.value - K.value), N)


# lowpass projection --------------------------------------------------------

def sinc_kernel(sigma: float, u):
    """S_sigma(u) = sin(sigma u) / (pi u), with the limit sigma/pi at 0."""
    u = np.asarray(u, dtype=float)
    return sigma / math.pi * np.sinc(sigma * u / math.pi)


@dataclass(frozen=True)
class Box:
    """height on [lo, hi], zero elsewhere."""

    lo: float = -1.0
    hi: float = 1.0
    height: float = 1.0
    decay = math.inf

    def values(self, t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= self.lo) & (t <= self.hi), self.height, 0.0)

    def descriptor(self):
        return {"kind": "box", "lo": self.lo, "hi": self.hi, "height": self.height}


@dataclass(frozen=True)
class SincPsi:
    """S_s(t) = sin(s t)/(pi t)."""

    s: float
    decay = 1.0

    def values(self, t):
        return sinc_kernel(self.s, t)

    def descriptor(self):
        return {"kind": "sinc", "s": self.s}


@dataclass(frozen=True)
class GaussCos:
    """exp(-a t^2) cos(w t)."""

    a: float = 1.0
    w: float = 2.0
    decay = math.inf

    def values(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-self.a * t * t) * np.cos(self.w * t)

    def descriptor(self):
        return {"kind": "gausscos", "a": self.a, "w": self.w}


@dataclass(frozen=True)
class BandlimitedPsi:
    f: BandlimitedFunction

    @property
    def decay(self):
        return self.f.decay

    def values(self, t):
        return self.f.values(np.asarray(t, dtype=float))

    def descriptor(self):
        return {"kind": "bandlimited", **self.f.descriptor()}


@dataclass(frozen=True)
class ProjectedPsi:
    """psi_1 of an earlier projection, used as input again."""

    proj: "LowpassProjection"
    decay = 1.0

    def values(self, t):
        return self.proj.psi1(t)

    def descriptor(self):
        return {"kind": "projected", "of": self.proj.psi.descriptor(), "sigma": self.proj.sigma}


def _psi_frequency(psi) -> float:
    if isinstance(psi, SincPsi):
        return psi.s
    if isinstance(psi, GaussCos):
        return psi.w + 6 * math.sqrt(psi.a)
    if isinstance(psi, BandlimitedPsi):
        return psi.f.sigma_nominal
    if isinstance(psi, ProjectedPsi):
        return psi.proj.sigma
    return 0.0


@dataclass(frozen=True)
class LowpassProjection:
    """psi_1(x) = int psi(t) S_sigma(t - x) dt, evaluated by quadrature."""

    psi: object
    sigma: float
    radius: float = 200.0

    def _scale(self):
        return max(self.sigma, _psi_frequency(self.psi))

    def psi1(self, x):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        S = self.sigma
        if isinstance(self.psi, Box):
            psi = self.psi
            edges = _gauss.make_edges(psi.lo, psi.hi, math.pi / (4 * S), ())
            a, b = edges[:-1], edges[1:]
            t = (0.5 * (a + b))[:, None] + 0.5 * (b - a)[:, None] * _gauss._X20[None, :]
            w = 0.5 * (b - a)[:, None] * _gauss._W20[None, :]
            out = psi.height * (sinc_kernel(S, t.ravel()[None, :] - flat[:, None]) @ w.ravel())
        elif isinstance(self.psi, GaussCos):
            T = math.sqrt(40 / self.psi.a)
            h = math.pi / (4 * self._scale())
            edges = _gauss.make_edges(-T, T, h, ())
            a, b = edges[:-1], edges[1:]
            t = (0.5 * (a + b))[:, None] + 0.5 * (b - a)[:, None] * _gauss._X20[None, :]
            w = 0.5 * (b - a)[:, None] * _gauss._W20[None, :]
            out = (sinc_kernel(S, t.ravel()[None, :] - flat[:, None]) * self.psi.values(t.ravel())[None, :]) @ w.ravel()
        else:
            psi = self.psi
            out, _ = fixed_line_integrals(lambda xx, tt: sinc_kernel(S, tt - xx), flat,
                                          sigma=min(S, _psi_frequency(psi) or S), decay=psi.decay + 1,
                                          R=self.radius, h_max=math.pi / self._scale(), factor=psi.values,
                                          chunk=64)
        return np.reshape(out, np.shape(x)) if np.ndim(x) else out[0]

    def spectrum_leakage(self, n: int = 1024, span: float | None = None, margin: float = 0.1) -> float:
        """Share of sampled spectral energy of psi_1 outside (1 + margin) sigma (Hann window)."""
        span = span or 64 * math.pi / self.sigma
        x = np.linspace(-span, span, n, endpoint=False)
        y = self.psi1(x) * np.hanning(n)
        Y = np.abs(np.fft.fft(y)) ** 2
        w = 2 * math.pi * np.fft.fftfreq(n, d=x[1] - x[0])
        total = Y.sum()
        return float(Y[np.abs(w) > (1 + margin) * self.sigma].sum() / total) if total > 0 else 0.0

    def descriptor(self):
        return {"psi": self.psi.descriptor(), "sigma": self.sigma}


def lowpass_project(psi, sigma: float, cfg: QuadratureConfig | None = None) -> LowpassProjection:
    """Projection of a bounded integrable psi onto the band [-sigma, sigma]."""
    cfg = cfg or QuadratureConfig()
    if isinstance(psi, LowpassProjection):
        psi = ProjectedPsi(psi)
    elif isinstance(psi, BandlimitedFunction):
        psi = BandlimitedPsi(psi)
    return LowpassProjection(psi, sigma, cfg.radius(sigma))


def annihilator_check(proj: LowpassProjection, tests, cfg: QuadratureConfig | None = None,
                      radius: float = 50.0) -> float:
    """max over tests of |int f conj(psi) - int f conj(psi_1)|."""
    cfg = cfg or QuadratureConfig()
    psi = proj.psi
    bps = [psi.lo, psi.hi] if isinstance(psi, Box) else []
    worst = 0.0
    gap = None
    for f in tests:
        if gap is None or f.sigma_nominal != gap[0]:
            # psi - psi_1 at the outer nodes is shared by every test of the same type
            gap = (f.sigma_nominal, {})
        cache = gap[1]

        def factor(t, f=f, cache=cache):
            key = (t.size, float(t[0]), float(t[-1]))
            if key not in cache:
                cache[key] = np.conj(psi.values(t) - proj.psi1(t))
            return f.values(t) * cache[key]

        # one wavelength of the fastest factor per 20-point panel
        h = 2 * math.pi / (f.sigma_nominal + proj._scale())
        val, _ = fixed_line_integrals(lambda xx, tt: np.ones_like(tt), [0.0],
                                      sigma=min(f.sigma_nominal, proj.sigma), decay=f.decay + 1,
                                      R=radius, h_max=h, breakpoints=bps, factor=factor)
        worst = max(worst, float(abs(val[0])))
    return worst


def reproducing_check(f: BandlimitedFunction, points, cfg: QuadratureConfig | None = None) -> float:
    """max over points t of |f(t) - int f(x) S_sigma(t - x) dx|."""
    cfg = cfg or QuadratureConfig()
    sigma = f.sigma_nominal
    worst = 0.0
    for t in points:
        res = integrate_line(lambda x, t=t: f.values(x) * sinc_kernel(sigma, t - x), sigma=sigma,
                             decay=f.decay + 1, cfg=cfg, feature_radius=max(f.feature_radius, abs(t)))
        worst = max(worst, float(abs(f.values(np.array([t]))[0] - res.value)))
    return worst


# weak-star witness ---------------------------------------------------------

@dataclass(frozen=True)
class WitnessRow:
    n: float
    sup_abs: float
    I_value: float


def _sup_abs(g: BandlimitedFunction, X: float) -> float:
    x = np.linspace(-X, X, int(64 * X * g.sigma_nominal / math.pi) + 65)
    v = np.abs(g.values(x))
    i = int(np.argmax(v))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    r = minimize_scalar(lambda t: -abs(g.values(np.array([t]))[0]), bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-12})
    return float(max(v[i], -r.fun))


def weak_star_witness(sigma: float, n_list, X: float, cfg: QuadratureConfig | None = None) -> list[WitnessRow]:
    """Rows (n, sup_{|x|<=X} |g_n|, I_f(g_n)) for g_n(x) = (sin(sigma(x-n)/2)/(x-n))^2."""
    if not X > 0:
        raise ValueError("X must be positive")
    cfg = cfg or QuadratureConfig()
    rows = []
    for n in n_list:
        g = make_catalog("shifted_sinc_sq", {"sigma": sigma, "n": float(n)})
        I = pair_integral(g, ConstantMean(-1.0 / 3), cfg)
        rows.append(WitnessRow(float(n), _sup_abs(g, X), float(I.value.real)))
    return rows
