"""Exposedness checks: exponential type, sine-type bounds, the zero
conditions of the characterization, the polynomial-weight infimum test and
the degree rule for sine-type quotients."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .funcat import (
    AdmissibilityError,
    BandlimitedFunction,
    EvaluationRangeError,
    Polynomial,
    normalize,
)
from .funcat.expr import PolyFactor, PolyQuotient
from .quad import QuadratureConfig, abs_integral_on_line, norm_cauchy_tail
from .zeros import (
    RectContour,
    complex_zeros,
    count_zeros_rect,
    detect_conjugate_pairs,
    real_zeros,
)


class Verdict(str, enum.Enum):
    EXPOSED_BY_THM31 = "ExposedByThm31"
    NOT_EXPOSED_BY_THM21 = "NotExposedByThm21"
    INCONCLUSIVE = "Inconclusive"


class Prop33Verdict(str, enum.Enum):
    NOT_IN_SPACE = "NotInSpace"
    EXPOSED = "Exposed"
    NOT_EXPOSED = "NotExposed"


class PreconditionError(ValueError):
    """Inputs of the degree rule do not satisfy its hypotheses."""


@dataclass(frozen=True)
class ExposeConfig:
    type_rtol: float = 0.02
    window: float | None = None  # default 20*pi/sigma
    strip: float | None = None  # default 3/sigma
    tau_grid: tuple = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
    y0_factors: tuple = (0.5, 1.0, 2.0, 3.0)  # y0 = factor * pi / sigma
    x_max: float | None = None  # default 1000/sigma
    positivity: float = 1e-6
    decade_slack: float = 1e-2
    sine_threshold: float = 1e-3
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)


@dataclass(frozen=True)
class SineTypeCert:
    sigma: float
    K: float
    c1: float
    c2: float
    grid_evidence: dict = field(compare=False, default_factory=dict)
    ok: bool = True


@dataclass(frozen=True)
class SineTypeFailure:
    sigma: float
    K: float
    point: complex
    value: float
    threshold: float
    ok: bool = False


@dataclass(frozen=True)
class Condition32Result:
    tau: float
    y0: float
    inf_value: float
    passed: bool
    threshold: float = 0.0
    decade_infima: tuple = ()
    grid: tuple = field(default=(), compare=False)  # (tau, y0, inf, passed) for every pair tried


@dataclass(frozen=True)
class ExposednessReport:
    type_estimate: float
    type_ok: bool
    conjugate_free: bool
    real_zeros_simple: bool
    cond32: Condition32Result
    verdict: Verdict
    evidence: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "type_estimate": self.type_estimate,
            "type_ok": self.type_ok,
            "conjugate_free": self.conjugate_free,
            "real_zeros_simple": self.real_zeros_simple,
            "cond32": {"tau": self.cond32.tau, "y0": self.cond32.y0,
                       "inf_value": self.cond32.inf_value, "passed": self.cond32.passed},
            "verdict": self.verdict.value,
            **self.evidence,
        }


def _fit_slope(r, logs):
    ok = np.isfinite(logs)
    r, logs = r[ok], logs[ok]
    X = np.stack([r, np.log(r), np.ones_like(r), 1 / r], axis=1)
    coef, *_ = np.linalg.lstsq(X, logs, rcond=None)
    return float(coef[0])


def estimate_type(f: BandlimitedFunction, y_max: float | None = None) -> float:
    """Growth exponent of log|f| along the imaginary axis, both directions.

    Fits s*r + c*log r + d + e/r on [y_max/2, y_max] and returns the larger s.
    """
    sigma = f.sigma_nominal
    y_max = y_max if y_max is not None else 80 / sigma
    if y_max < 10 / sigma:
        raise ValueError("estimate_type needs y_max >= 10/sigma")
    for attempt in range(2):
        r = np.linspace(y_max / 2, y_max, 64)
        slopes = []
        finite = True
        for direction in (1j, -1j):
            vals = np.abs(f.values(direction * r))
            if not np.all(np.isfinite(vals)):
                finite = False
                break
            with np.errstate(divide="ignore"):
                slopes.append(_fit_slope(r, np.log(vals)))
        if finite:
            return max(slopes)
        y_max /= 2
    raise EvaluationRangeError(f"{f.name}: overflow while estimating type")


def sine_type_check(F: BandlimitedFunction, sigma: float, K: float, X: float | None = None,
                    threshold: float = 1e-3, nx: int = 257, ny: int = 17):
    """Sample |F(x+iy)| exp(-sigma|y|) for |x| <= X and K <= |y| <= K + 2/sigma.

    Succeeds when every sample exceeds ``threshold`` times the largest one.
    """
    if not K > 0:
        raise ValueError("sine_type_check needs K > 0")
    X = X if X is not None else 4 * math.pi / sigma
    x = np.linspace(-X, X, nx)
    yp = np.linspace(K, K + 2 / sigma, ny)
    y = np.concatenate([-yp[::-1], yp])
    Z = x[None, :] + 1j * y[:, None]
    vals = np.abs(F.values(Z)) * np.exp(-sigma * np.abs(y))[:, None]
    if not np.all(np.isfinite(vals)):
        raise EvaluationRangeError(f"{F.name}: overflow in sine-type grid")
    vmax = float(vals.max())
    i = np.unravel_index(np.argmin(vals), vals.shape)
    vmin = float(vals[i])
    if not vmin > threshold * vmax:
        return SineTypeFailure(sigma, K, complex(Z[i]), vmin, threshold * vmax)
    evidence = {"min": vmin, "max": vmax, "x_extent": X, "y_range": [K, K + 2 / sigma], "samples": vals.size}
    return SineTypeCert(sigma, K, vmin, vmax, evidence)


def _line_grid(sigma: float, x_max: float) -> np.ndarray:
    uniform = np.arange(0.0, x_max + 1e-12, math.pi / (8 * sigma))
    geometric = np.geomspace(1e-3 / sigma, x_max, 400)
    pos = np.union1d(uniform, geometric)
    return np.concatenate([-pos[::-1], pos[1:]])


def _refined_min(func, x: np.ndarray, v: np.ndarray) -> float:
    i = int(np.argmin(v))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    if hi > lo:
        r = minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * (1 + abs(x[i]))})
        return float(min(v[i], r.fun))
    return float(v[i])


def _cond32_one(f, tau, y0, x, x_max, cfg):
    g = np.abs(f.values(x + 1j * y0))
    scale = float(g.max())
    weight = np.abs(x + 1j * y0) ** tau
    v = weight * g

    def func(t):
        return float(abs(t + 1j * y0) ** tau * abs(f.values(np.array([t + 1j * y0]))[0]))

    inf_all = _refined_min(func, x, v)
    ax = np.abs(x)
    last = ax >= x_max / 10
    prev = (ax >= x_max / 100) & (ax < x_max / 10)
    inf_last = min(_refined_min(func, x[last & (x > 0)], v[last & (x > 0)]),
                   _refined_min(func, x[last & (x < 0)], v[last & (x < 0)]))
    inf_prev = min(_refined_min(func, x[prev & (x > 0)], v[prev & (x > 0)]),
                   _refined_min(func, x[prev & (x < 0)], v[prev & (x < 0)]))
    threshold = cfg.positivity * scale
    passed = inf_all >= threshold and inf_last >= (1 - cfg.decade_slack) * inf_prev
    return inf_all, threshold, (inf_prev, inf_last), passed


def condition_32_search(f: BandlimitedFunction, tau_grid=None, y0_grid=None, x_max: float | None = None,
                        cfg: ExposeConfig | None = None) -> Condition32Result:
    """Search (tau, y0) for a positive infimum of |x+iy0|^tau |f(x+iy0)| over real x."""
    cfg = cfg or ExposeConfig()
    sigma = f.sigma_nominal
    tau_grid = tuple(tau_grid if tau_grid is not None else cfg.tau_grid)
    if any(not 0 < t <= 3 for t in tau_grid):
        raise ValueError("tau must lie in (0, 3]")
    y0_grid = tuple(y0_grid if y0_grid is not None else (c * math.pi / sigma for c in cfg.y0_factors))
    x_max = x_max if x_max is not None else (cfg.x_max or 1000 / sigma)
    if x_max < 100 / sigma * (1 - 1e-12):
        raise ValueError("condition_32_search needs x_max >= 100/sigma")
    x = _line_grid(sigma, x_max)
    rows = []
    best = None
    for y0 in y0_grid:
        for tau in tau_grid:
            inf_all, thr, dec, passed = _cond32_one(f, tau, y0, x, x_max, cfg)
            rows.append((tau, y0, inf_all, passed))
            # rank: passing first, then by margin over the threshold or by decade ratio
            key = (passed, inf_all / thr if passed else dec[1] / dec[0] if dec[0] > 0 else 0.0)
            if best is None or key > best[0]:
                best = (key, Condition32Result(tau, y0, inf_all, passed, thr, dec))
    res = best[1]
    return Condition32Result(res.tau, res.y0, res.inf_value, res.passed, res.threshold, res.decade_infima, tuple(rows))


def _clear_edge(f: BandlimitedFunction, W: float) -> float:
    """Move the edge W to a midpoint between real zeros if one sits close to it."""
    h = math.pi / f.sigma_nominal
    zs = real_zeros(f, (W - h, W + h)).real_locations
    guard = 0.05 * h
    if len(zs) == 0 or np.min(np.abs(zs - W)) > guard:
        return W
    below, above = zs[zs < W], zs[zs >= W]
    if len(below) and len(above):
        return float((below[-1] + above[0]) / 2)
    return W + 2 * guard if len(below) else W - 2 * guard


def conjugate_zero_check(f: BandlimitedFunction, W: float, H: float):
    """Compare the contour count over [-W, W] x [-H, H] with the real-zero count.

    Returns (conjugate_free, real ZeroSet, evidence dict). Nonreal zeros are
    only located when the two counts differ.
    """
    lo, hi = _clear_edge(f, -W), _clear_edge(f, W)
    rect = RectContour(lo, hi, -H, H)
    reals = real_zeros(f, (lo, hi))
    n_real = reals.count()
    n_rect = count_zeros_rect(f, rect)
    evidence = {"window": [lo, hi, -H, H], "real_count": n_real, "contour_count": n_rect,
                "conjugate_pairs": []}
    if n_rect == n_real:
        return True, reals, evidence
    pairs = detect_conjugate_pairs(complex_zeros(f, rect))
    evidence["conjugate_pairs"] = [[p[0].real, p[0].imag] for p in pairs]
    return not pairs, reals, evidence


def classify_exposedness(f: BandlimitedFunction, sigma: float | None = None,
                         cfg: ExposeConfig | None = None) -> ExposednessReport:
    """Zero conditions of the characterization plus the sufficient infimum test."""
    cfg = cfg or ExposeConfig()
    sigma = sigma or f.sigma_nominal
    est = estimate_type(f)
    type_ok = abs(est - sigma) <= cfg.type_rtol * sigma
    W = cfg.window or 20 * math.pi / sigma
    H = cfg.strip or 3 / sigma
    conj_free, reals, evidence = conjugate_zero_check(f, W, H)
    simple = all(z.multiplicity == 1 for z in reals.zeros)
    cond = condition_32_search(f, cfg=cfg)
    if not (type_ok and conj_free and simple):
        verdict = Verdict.NOT_EXPOSED_BY_THM21
    elif cond.passed:
        verdict = Verdict.EXPOSED_BY_THM31
    else:
        verdict = Verdict.INCONCLUSIVE
    evidence["multiple_real_zeros"] = [z.location.real for z in reals.zeros if z.multiplicity > 1]
    return ExposednessReport(est, bool(type_ok), bool(conj_free), bool(simple), cond, verdict, evidence)


@dataclass(frozen=True)
class Prop33Result:
    verdict: Prop33Verdict
    degree: int
    confirmed: bool | None  # outcome of the cross-validation hook, None when skipped
    evidence: dict = field(default_factory=dict, compare=False)


def prop33_classify(F: BandlimitedFunction, q: Polynomial, cfg: ExposeConfig | None = None,
                    hooks: bool = True) -> Prop33Result:
    """Degree rule for alpha*F/q with F sine-type; optionally cross-validated numerically.

    deg q < 2 leaves L1, 2 <= deg q <= 3 is exposed, deg q > 3 is not
    (z^2 f_q stays in the space). The hooks check divergence of the norm,
    Cauchy tails of the norm, and membership of z^2 f_q respectively.
    """
    cfg = cfg or ExposeConfig()
    sigma = F.sigma_nominal
    K = 2 * math.pi / sigma
    cert = sine_type_check(F, sigma, K, threshold=cfg.sine_threshold)
    if not cert.ok:
        raise PreconditionError(f"{F.name} failed the sine-type check at {cert.point}")
    W = cfg.window or 20 * math.pi / sigma
    conj_free, reals, _ = conjugate_zero_check(F, W, cfg.strip or 3 / sigma)
    if not conj_free:
        raise PreconditionError(f"{F.name} has conjugate zeros in the window")
    multiple = [z.location for z in reals.zeros if z.multiplicity > 1]
    if multiple:
        raise PreconditionError(f"{F.name} has a multiple real zero at {multiple[0]}")
    try:
        expr = PolyQuotient(F.expr, q)
    except AdmissibilityError as exc:
        raise PreconditionError(str(exc)) from exc
    fq = BandlimitedFunction(expr, sigma, 1.0, "sinetype_quotient",
                             (("F", F.name), ("q_roots", tuple(q.roots)), ("sigma", sigma)))
    deg = q.degree
    if deg < 2:
        verdict = Prop33Verdict.NOT_IN_SPACE
    elif deg <= 3:
        verdict = Prop33Verdict.EXPOSED
    else:
        verdict = Prop33Verdict.NOT_EXPOSED
    evidence = {"sine_type": {"c1": cert.c1, "c2": cert.c2, "K": K}}
    confirmed = None
    if hooks:
        confirmed, hook = _prop33_hook(fq, verdict, cfg.quad)
        evidence.update(hook)
    return Prop33Result(verdict, deg, confirmed, evidence)


def _prop33_hook(fq, verdict, quad):
    if verdict is Prop33Verdict.NOT_IN_SPACE:
        res = abs_integral_on_line(fq, 0.0, quad)
        diverged = res.diagnostic.get("status") == "diverged"
        return diverged, {"norm_growth": res.diagnostic}
    f = normalize(fq, quad)
    out = {"cauchy_tail": norm_cauchy_tail(f, quad)}
    ok = out["cauchy_tail"] <= 1e-6
    if verdict is Prop33Verdict.NOT_EXPOSED:
        h = Polynomial.from_roots([0.0, 0.0])
        zf = BandlimitedFunction(PolyFactor(f.expr, h), f.sigma_nominal, f.alpha, "z^2*f_q", f.params)
        res = abs_integral_on_line(zf, 0.0, quad)
        zn = normalize(zf, quad) if res.converged else None
        out["multiplier_norm"] = res.value
        out["multiplier_converged"] = res.converged
        out["multiplier_cauchy_tail"] = norm_cauchy_tail(zn, quad) if zn is not None else math.inf
        ok = ok and res.converged and out["multiplier_cauchy_tail"] <= 1e-6
    return ok, out
