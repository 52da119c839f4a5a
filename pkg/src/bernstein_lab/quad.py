"""Integrals along horizontal lines R + ia with algebraic-tail extrapolation.

The line is cut at a truncation radius R. Inside, adaptive Gauss panels are
placed between the known real zeros of the integrand (|f| has kinks there).
Outside, the integral over consecutive blocks (whole multiples of 4*pi/sigma,
together covering at least [R, 2R]) is a smooth function of the block position; it is fitted by a short series in
(R/x)^(p+j), with p the algebraic decay order, and summed to infinity with
Hurwitz zeta values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from . import _gauss
from .funcat import BandlimitedFunction, Polynomial
from .funcat.expr import PolyFactor

log = logging.getLogger(__name__)

DIVERGENCE_RATIO = 0.85


@dataclass(frozen=True)
class QuadratureConfig:
    truncation_radius: float | None = None  # default 200*pi/sigma
    abs_tolerance: float = 1e-8
    max_subdivisions: int = 50
    tail_decay_exponent_hint: float | None = None
    pole_guard_radius: float = 1e-4
    tail_blocks: int = 24

    def __post_init__(self):
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise ValueError("truncation radius must be positive")
        if not self.abs_tolerance > 0:
            raise ValueError("abs_tolerance must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def radius(self, sigma: float) -> float:
        return self.truncation_radius or 200 * math.pi / sigma

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class LineIntegralResult:
    value: complex | float
    error_estimate: float
    converged: bool
    truncation_used: float
    diagnostic: dict = field(default_factory=dict, compare=False)


def _tail_extrapolate(blocks: np.ndarray, R: float, L: float, p: float, j_max: int = 7):
    """Sum of the block series beyond the fitted blocks; returns (value, error).

    ``blocks`` has shape (K,) or (K, m); in the second case each column is
    extrapolated separately and arrays are returned.
    """
    K = blocks.shape[0]
    shape = blocks.shape[1:]
    if not p > 1:
        return np.full(shape, np.nan)[()], np.full(shape, np.inf)[()]
    if np.all(blocks == 0):
        return np.zeros(shape)[()], np.zeros(shape)[()]
    t = R / (R + L * np.arange(K))
    q = K + R / L
    estimates = []
    for J in range(2, j_max + 1):
        A = np.stack([t ** (p + j) for j in range(J)], axis=1)
        coef, *_ = np.linalg.lstsq(A, blocks, rcond=None)
        sums = np.array([(R / L) ** (p + j) * zeta(p + j, q) for j in range(J)])
        estimates.append(sums @ coef)
    err = np.maximum(np.abs(estimates[-1] - estimates[-2]), np.abs(estimates[-2] - estimates[-3]))
    return estimates[-1], (err if np.ndim(err) else float(err))


def fixed_line_integrals(func2d, xs, *, sigma: float, decay: float, R: float, h_max: float | None = None,
                         breakpoints=(), blocks: int = 24, chunk: int = 16, factor=None):
    """Integrals over the real line of t -> func2d(x, t) for every x in ``xs``.

    Non-adaptive Gauss panels on [-R, R] plus tail blocks, with the same tail
    extrapolation as ``integrate_line``; meant for smooth integrands that have
    to be integrated for many parameter values at once. ``factor(t)``, if given,
    multiplies the integrand and is evaluated once. Returns (values, errors).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    period = 4 * math.pi / sigma
    L = period * max(1, math.ceil(R / (blocks * period)))
    outer = R + blocks * L
    marks = list(R + L * np.arange(blocks + 1)) + list(-R - L * np.arange(blocks + 1))
    edges = _gauss.make_edges(-outer, outer, min(math.pi / (2 * sigma), h_max or math.inf),
                              list(breakpoints) + marks)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * _gauss._X20[None, :]
    weights = half[:, None] * _gauss._W20[None, :]
    right = [(a >= R + k * L - 1e-9) & (b <= R + (k + 1) * L + 1e-9) for k in range(blocks)]
    left = [(b <= -R - k * L + 1e-9) & (a >= -R - (k + 1) * L - 1e-9) for k in range(blocks)]
    core = (a >= -R - 1e-9) & (b <= R + 1e-9)
    fac = None if factor is None else np.asarray(factor(nodes.ravel())).reshape(nodes.shape)
    values, errors = [], []
    for i in range(0, len(xs), chunk):
        x = xs[i:i + chunk]
        with np.errstate(all="ignore"):
            y = func2d(x[:, None, None], nodes[None, :, :])
            if fac is not None:
                y = y * fac[None]
        panel = (y * weights[None]).sum(axis=2)
        total = panel[:, core].sum(axis=1)
        err = np.zeros(len(x))
        for masks in (right, left):
            B = np.stack([panel[:, m].sum(axis=1) for m in masks])
            beyond, terr = _tail_extrapolate(B, R, L, decay)
            total = total + B.sum(axis=0) + beyond
            err = err + terr
        values.append(total)
        errors.append(err)
    return np.concatenate(values), np.concatenate(errors)


def _decay(f_decay: float, cfg: QuadratureConfig) -> float:
    return cfg.tail_decay_exponent_hint if cfg.tail_decay_exponent_hint is not None else f_decay


def integrate_line(integrand, *, sigma: float, decay: float, cfg: QuadratureConfig,
                   feature_radius: float = 0.0, breakpoints=None, lo: float = -math.inf,
                   hi: float = math.inf, radius: float | None = None,
                   h_max: float | None = None) -> LineIntegralResult:
    """Integral of ``integrand`` over [lo, hi] (either end may be infinite).

    ``sigma`` sets the block period 4*pi/sigma and, unless ``h_max`` is given,
    the panel width pi/(2*sigma). ``breakpoints(a, b)`` returns kink/jump
    locations inside [a, b].
    """
    period = 4 * math.pi / sigma
    K = cfg.tail_blocks
    R = radius or max(cfg.radius(sigma), 4 * feature_radius + period)
    if math.isfinite(lo):
        R = max(R, abs(lo) + period)
    if math.isfinite(hi):
        R = max(R, abs(hi) + period)
    # blocks hold whole periods and together span at least [R, 2R], so the fit sees t = R/x in [1/2, 1]
    L = period * max(1, math.ceil(R / (K * period)))
    left = lo if math.isfinite(lo) else -(R + K * L)
    right = hi if math.isfinite(hi) else R + K * L
    marks = [left, right]
    if not math.isfinite(hi):
        marks += list(R + L * np.arange(K + 1))
    if not math.isfinite(lo):
        marks += list(-R - L * np.arange(K + 1))
    bps = list(breakpoints(left, right)) if breakpoints is not None else []
    h = min(math.pi / (2 * sigma), h_max or math.inf)
    edges = _gauss.make_edges(left, right, h, bps + marks)
    a, b, v, e, ok = _gauss.adaptive_panels(integrand, edges, cfg.abs_tolerance / 4, cfg.max_subdivisions)

    def span(x0, x1):
        m = (a >= x0 - 1e-12 * (1 + abs(x0))) & (b <= x1 + 1e-12 * (1 + abs(x1)))
        return v[m].sum(), e[m].sum()

    core_lo = left if math.isfinite(lo) else -R
    core_hi = right if math.isfinite(hi) else R
    value, err = span(core_lo, core_hi)
    diag = {"status": "ok", "core": complex(value)}
    tail_total = 0j
    for side, infinite in (("right", not math.isfinite(hi)), ("left", not math.isfinite(lo))):
        if not infinite:
            continue
        sgn = 1 if side == "right" else -1
        blocks = []
        for k in range(K):
            x0, x1 = sorted((sgn * (R + k * L), sgn * (R + (k + 1) * L)))
            bv, be = span(x0, x1)
            blocks.append(bv)
            err += be
        blocks = np.array(blocks)
        beyond, terr = _tail_extrapolate(blocks, R, L, decay)
        tail_total += blocks.sum() + (beyond if math.isfinite(terr) else 0)
        err += terr
        diag[f"tail_{side}"] = complex(blocks.sum() + beyond) if math.isfinite(terr) else None
    value = value + tail_total
    converged = bool(ok.all()) and err <= cfg.abs_tolerance
    if not math.isfinite(err):
        diag["status"] = "not_summable"
    elif not converged:
        diag["status"] = "tolerance"
    return LineIntegralResult(value, float(err), converged, R, diag)


def _retrying(integrand, **kw) -> LineIntegralResult:
    """integrate_line, doubling the truncation radius up to twice on a tolerance miss."""
    res = integrate_line(integrand, **kw)
    first = res
    for factor in (2, 4):
        if res.converged:
            break
        kw["radius"] = first.truncation_used * factor
        res = integrate_line(integrand, **kw)
    return res


def _zero_breakpoints(f: BandlimitedFunction):
    from .zeros import real_zeros

    def bp(lo, hi):
        return real_zeros(f, (lo, hi)).real_locations

    return bp


def _abs_integrand(f: BandlimitedFunction, a: float):
    return lambda x: np.abs(f.values(x + 1j * a))


def truncated_partials(f: BandlimitedFunction, radii, a: float = 0.0, cfg: QuadratureConfig | None = None):
    """Truncated integrals of |f(x + ia)| over [-r, r] for each radius r."""
    cfg = cfg or QuadratureConfig()
    radii = np.sort(np.asarray(radii, dtype=float))
    X = radii[-1]
    bps = _zero_breakpoints(f)(-X, X) if a == 0 else []
    edges = _gauss.make_edges(-X, X, math.pi / (2 * f.sigma_nominal),
                              list(bps) + list(radii) + list(-radii))
    lo, hi, v, e, ok = _gauss.adaptive_panels(_abs_integrand(f, a), edges, cfg.abs_tolerance / 4,
                                              cfg.max_subdivisions)
    out = []
    for r in radii:
        m = (lo >= -r - 1e-9) & (hi <= r + 1e-9)
        out.append(float(v[m].sum().real))
    return np.array(out)


def fit_log_growth(radii, partials) -> dict:
    """Least-squares fit partial(r) = A + B log r; residual relative to the growth."""
    radii = np.asarray(radii, dtype=float)
    partials = np.asarray(partials, dtype=float)
    X = np.stack([np.ones_like(radii), np.log(radii)], axis=1)
    (A, B), *_ = np.linalg.lstsq(X, partials, rcond=None)
    resid = partials - (A + B * np.log(radii))
    span = abs(B) * (np.log(radii[-1]) - np.log(radii[0]))
    rel = float(np.max(np.abs(resid)) / span) if span > 0 else math.inf
    return {"law": "A + B log R", "A": float(A), "B": float(B), "fit_residual": rel}


def _divergence_check(f, a, R, cfg):
    radii = R * 2.0 ** np.arange(0, 2.01, 0.25)
    P = truncated_partials(f, radii, a, cfg)
    d1 = P[4] - P[0]
    d2 = P[8] - P[4]
    ratio = d2 / d1 if d1 > 0 else 0.0
    growth = fit_log_growth(radii, P)
    growth.update({"increment_ratio": float(ratio), "partials": P.tolist(), "radii": radii.tolist()})
    return ratio > DIVERGENCE_RATIO, P[-1], growth


def abs_integral_on_line(f: BandlimitedFunction, a: float = 0.0, cfg: QuadratureConfig | None = None) -> LineIntegralResult:
    """Integral of |f(x + ia)| over the real line."""
    cfg = cfg or QuadratureConfig()
    sigma = f.sigma_nominal
    p = _decay(f.decay, cfg)
    bps = _zero_breakpoints(f) if a == 0 else None
    if p > 1:
        res = _retrying(_abs_integrand(f, a), sigma=sigma, decay=p, cfg=cfg,
                        feature_radius=f.feature_radius, breakpoints=bps)
        if res.converged:
            return LineIntegralResult(float(res.value.real), res.error_estimate, True,
                                      res.truncation_used, res.diagnostic)
        R = res.truncation_used / 4
    else:
        R = max(cfg.radius(sigma), 4 * f.feature_radius)
    diverged, last, growth = _divergence_check(f, a, R, cfg)
    if diverged:
        growth["status"] = "diverged"
        return LineIntegralResult(float(last), math.inf, False, 4 * R, growth)
    # increments shrink although the structural decay says otherwise: extrapolate with p = 2
    res = integrate_line(_abs_integrand(f, a), sigma=sigma, decay=max(p, 2.0), cfg=cfg,
                         breakpoints=bps, radius=R)
    res.diagnostic.update(growth)
    log.warning("%s: decay hint %s looks pessimistic; extrapolated with p=2", f.name, p)
    return LineIntegralResult(float(res.value.real), res.error_estimate, res.converged,
                              res.truncation_used, res.diagnostic)


def pair_integral(g: BandlimitedFunction, w, cfg: QuadratureConfig | None = None) -> LineIntegralResult:
    """Integral of g(x) w(x) over the real line for a bounded weight w.

    ``w`` is any weight kernel: callable on real arrays, with ``breakpoints(lo, hi)``
    and optional ``sigma`` (frequency scale) and ``panel_width`` attributes.
    """
    cfg = cfg or QuadratureConfig()
    p = _decay(g.decay, cfg)
    if p <= 1:
        res = abs_integral_on_line(g, 0.0, cfg)
        if not res.converged:
            return LineIntegralResult(math.nan, math.inf, False, res.truncation_used, res.diagnostic)
    ws = getattr(w, "sigma", None)
    sigma = min(g.sigma_nominal, ws) if ws else g.sigma_nominal
    h = math.pi / (2 * max(g.sigma_nominal, ws or 0.0))
    if getattr(w, "panel_width", None):
        h = min(h, w.panel_width)
    return _retrying(lambda x: g.values(x) * w(x), sigma=sigma, decay=p, cfg=cfg,
                     feature_radius=max(g.feature_radius, getattr(w, "feature_radius", 0.0)),
                     breakpoints=w.breakpoints, h_max=h)


def interval_mass(g: BandlimitedFunction, u: float, v: float, cfg: QuadratureConfig | None = None) -> float:
    """Integral of |g| over [u, v]; either end may be infinite."""
    cfg = cfg or QuadratureConfig()
    if not u <= v:
        raise ValueError("interval_mass needs u <= v")
    if u == v:
        return 0.0
    bps = _zero_breakpoints(g)
    if math.isfinite(u) and math.isfinite(v):
        val, _, _ = _gauss.integrate(_abs_integrand(g, 0.0), u, v, tol=cfg.abs_tolerance / 4,
                                     h_max=math.pi / (2 * g.sigma_nominal), breakpoints=bps(u, v),
                                     max_depth=cfg.max_subdivisions)
        return float(val.real)
    res = _retrying(_abs_integrand(g, 0.0), sigma=g.sigma_nominal, decay=_decay(g.decay, cfg), cfg=cfg,
                    feature_radius=g.feature_radius, breakpoints=bps, lo=u, hi=v)
    return float(res.value.real)


def norm_cauchy_tail(f: BandlimitedFunction, cfg: QuadratureConfig | None = None) -> float:
    """|N(R) - N(2R)| for tail-corrected norm estimates at truncation R and 2R."""
    cfg = cfg or QuadratureConfig()
    sigma = f.sigma_nominal
    R = max(cfg.radius(sigma), 4 * f.feature_radius + 4 * math.pi / sigma)
    p = _decay(f.decay, cfg)
    bps = _zero_breakpoints(f)
    vals = [integrate_line(_abs_integrand(f, 0.0), sigma=sigma, decay=p, cfg=cfg, breakpoints=bps,
                           radius=r).value.real for r in (R, 2 * R)]
    return float(abs(vals[1] - vals[0]))


def multiplier_z2(f: BandlimitedFunction) -> BandlimitedFunction:
    """z^2 f(z), the nonnegative zero-type multiplier."""
    return BandlimitedFunction(PolyFactor(f.expr, Polynomial.from_roots([0.0, 0.0])), f.sigma_nominal,
                               f.alpha, f"z^2*{f.name}", f.params)
