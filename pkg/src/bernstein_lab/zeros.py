"""Zero location: real zeros by scan and refine, complex zeros by the
argument principle on rectangles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _gauss
from .funcat import BandlimitedFunction, differentiate

MAX_MULTIPLICITY = 4
REALNESS_TOL = 1e-8
# boundary samples closer than this fraction of their spacing to a zero
# trigger a retry; anything subtler shows up as a failed side integral
CLEARANCE = 0.05


class ContourError(RuntimeError):
    """A zero sits too close to the contour, even after retries."""


@dataclass(frozen=True)
class Zero:
    location: complex
    multiplicity: int = 1
    is_real: bool | None = True
    residual: float = 0.0
    converged: bool = True


@dataclass(frozen=True)
class ZeroSet:
    zeros: tuple[Zero, ...]
    window: tuple[float, ...]
    min_real_gap: float = math.inf

    @classmethod
    def build(cls, zeros, window) -> "ZeroSet":
        zs = tuple(sorted(zeros, key=lambda z: (z.location.real, z.location.imag)))
        real = [z.location.real for z in zs if z.is_real]
        gap = float(np.min(np.diff(real))) if len(real) >= 2 else math.inf
        return cls(zs, tuple(window), gap)

    @property
    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=complex)

    @property
    def real_locations(self) -> np.ndarray:
        return np.array([z.location.real for z in self.zeros if z.is_real])

    def count(self) -> int:
        """Number of zeros with multiplicity."""
        return sum(z.multiplicity for z in self.zeros)

    def __len__(self):
        return len(self.zeros)

    def to_table(self) -> dict:
        return {
            "columns": ["re", "im", "multiplicity", "residual"],
            "rows": [[z.location.real, z.location.imag, z.multiplicity, z.residual] for z in self.zeros],
        }


@dataclass(frozen=True)
class RectContour:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError(f"degenerate rectangle {self}")

    def grown(self, d: float) -> "RectContour":
        return RectContour(self.x_lo - d, self.x_hi + d, self.y_lo - d, self.y_hi + d)

    def shrunk(self, factor: float = 0.99) -> "RectContour":
        cx, cy = (self.x_lo + self.x_hi) / 2, (self.y_lo + self.y_hi) / 2
        hx, hy = (self.x_hi - self.x_lo) / 2 * factor, (self.y_hi - self.y_lo) / 2 * factor
        return RectContour(cx - hx, cx + hx, cy - hy, cy + hy)

    def contains(self, z: complex) -> bool:
        return self.x_lo <= z.real <= self.x_hi and self.y_lo <= z.imag <= self.y_hi


def _scan_step(f: BandlimitedFunction) -> float:
    return math.pi / (8 * f.sigma_nominal)


def _local_scale(x0: np.ndarray, grid: np.ndarray, absvals: np.ndarray, width: float) -> np.ndarray:
    lo = np.searchsorted(grid, x0 - width)
    hi = np.searchsorted(grid, x0 + width)
    out = np.empty(len(x0))
    for i, (l, h) in enumerate(zip(lo, hi)):
        out[i] = absvals[l:max(h, l + 1)].max()
    return out


def _bisect(func, lo: np.ndarray, hi: np.ndarray, iters: int = 40):
    """Vectorized bisection on real-valued ``func`` with sign(lo) != sign(hi)."""
    flo = func(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return lo, hi


def _multiplicities(f, x0, scale, sigma, tol=1e-6):
    """First non-vanishing derivative order (Bernstein scale sigma^j * sup|f|)."""
    mult = np.full(len(x0), MAX_MULTIPLICITY, dtype=int)
    undecided = np.ones(len(x0), dtype=bool)
    g = f
    for j in range(1, MAX_MULTIPLICITY + 1):
        if not undecided.any():
            break
        g = differentiate(g)
        d = np.abs(g.values(x0[undecided]))
        nz = d > tol * scale[undecided] * sigma**j
        idx = np.flatnonzero(undecided)
        mult[idx[nz]] = j
        undecided[idx[nz]] = False
    return mult


def real_zeros(f: BandlimitedFunction, interval, cfg=None) -> ZeroSet:
    """All real zeros of f in [a, b] with multiplicities."""
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError("real_zeros needs a < b")
    return _real_zeros_cached(f, a, b)


@lru_cache(maxsize=256)
def _real_zeros_cached(f: BandlimitedFunction, a: float, b: float) -> ZeroSet:
    sigma = f.sigma_nominal
    h = _scan_step(f)
    n = max(8, int(math.ceil((b - a) / h)))
    # pad by one cell so zeros sitting on an endpoint still show a sign change
    pad = (b - a) / n
    x = np.linspace(a - pad, b + pad, n + 3)
    v = f.values(x)
    av = np.abs(v)
    vmax = av.max()
    if vmax == 0:
        return ZeroSet.build([], (a, b))
    phase = np.exp(-1j * np.angle(v[np.argmax(av)]))
    rv = v * phase
    if np.max(np.abs(rv.imag)) <= 1e-9 * vmax:
        locs = _real_mode(f, phase, x, rv.real)
    else:
        locs = _complex_mode(f, x, av)
    slack = 1e-12 * (1 + max(abs(a), abs(b)))
    locs = np.sort(locs[(locs >= a - slack) & (locs <= b + slack)])
    if len(locs) > 1:
        keep = np.concatenate([[True], np.diff(locs) > 1e-12 * (1 + np.abs(locs[1:]))])
        locs = locs[keep]
    if len(locs) == 0:
        return ZeroSet.build([], (a, b))
    scale = _local_scale(locs, x, av, 2 * math.pi / sigma)
    resid = np.abs(f.values(locs))
    mult = _multiplicities(f, locs.astype(complex), scale, sigma)
    zeros = []
    for loc, m, r, s in zip(locs, mult, resid, scale):
        ok = r <= 1e-10 * max(1.0, s)
        zeros.append(Zero(complex(loc), int(m), True if ok else None, float(r), bool(ok)))
    return ZeroSet.build(zeros, (a, b))


def _real_mode(f, phase, x, s):
    def fr(t):
        return (f.values(t) * phase).real

    df = differentiate(f)

    def dfr(t):
        return (df.values(t) * phase).real

    found = [x[s == 0]]
    sl, sr = s[:-1], s[1:]
    brackets_lo = [x[:-1][sl * sr < 0]]
    brackets_hi = [x[1:][sl * sr < 0]]
    # cells without a sign change but with a critical point may hide a pair
    d = dfr(x)
    cand = (sl * sr > 0) & (d[:-1] * d[1:] < 0)
    if cand.any():
        lo, hi = _bisect(dfr, x[:-1][cand], x[1:][cand], iters=55)
        xe = 0.5 * (lo + hi)
        se = fr(xe)
        cl, cr = x[:-1][cand], x[1:][cand]
        flip = np.sign(se) != np.sign(sl[cand])
        flip &= se != 0
        brackets_lo += [cl[flip], xe[flip]]
        brackets_hi += [xe[flip], cr[flip]]
        scale = np.maximum(np.abs(sl[cand]), np.abs(sr[cand]))
        touch = ~flip & (np.abs(se) <= 1e-10 * np.maximum(scale, 1.0) * 1e-2)
        touch |= se == 0
        found.append(xe[touch])
    lo = np.concatenate(brackets_lo)
    hi = np.concatenate(brackets_hi)
    if len(lo):
        lo, hi = _bisect(fr, lo, hi, iters=34)
        root = 0.5 * (lo + hi)
        # Newton polish, kept inside the bracket
        for _ in range(3):
            step = fr(root) / dfr(root)
            root = np.clip(root - np.where(np.isfinite(step), step, 0.0), lo, hi)
        found.append(root)
    return np.concatenate(found)


def _complex_mode(f, x, av):
    df = differentiate(f)
    interior = np.flatnonzero((av[1:-1] <= av[:-2]) & (av[1:-1] <= av[2:])) + 1
    z = x[interior].astype(complex)
    for _ in range(40):
        step = f.values(z) / df.values(z)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
    good = (np.abs(z.imag) <= REALNESS_TOL) & (np.abs(f.values(z)) <= 1e-10 * max(1.0, av.max()))
    return z[good].real


def _log_derivative(f: BandlimitedFunction):
    df = differentiate(f)
    return lambda z: df.values(z) / f.values(z)


def _contour_moment(f, rect: RectContour, power: int = 0, tol: float = 1e-8):
    """(1/2 pi i) * integral of z**power f'/f around the rectangle."""
    ld = _log_derivative(f)
    h = math.pi / (2 * f.sigma_nominal)

    def side(z0, z1):
        dz = z1 - z0
        length = abs(dz)

        def g(t):
            z = z0 + dz * (t / length)
            return ld(z) * z**power * (dz / length)

        return _gauss.integrate(g, 0.0, length, tol=tol, h_max=h)

    c = [complex(rect.x_lo, rect.y_lo), complex(rect.x_hi, rect.y_lo),
         complex(rect.x_hi, rect.y_hi), complex(rect.x_lo, rect.y_hi)]
    total, err, ok = 0j, 0.0, True
    for k in range(4):
        v, e, o = side(c[k], c[(k + 1) % 4])
        total += v
        err += e
        ok &= o
    return total / (2j * math.pi), err / (2 * math.pi), ok


def _boundary_clearance(f, rect: RectContour) -> float:
    """Smallest |f/f'| on the boundary sample, in units of the sample spacing.

    |f/f'| approximates the distance to a simple zero.
    """
    df = differentiate(f)
    step = _boundary_step(f, rect)
    out = math.inf
    for z0, z1 in [((rect.x_lo, rect.y_lo), (rect.x_hi, rect.y_lo)),
                   ((rect.x_hi, rect.y_lo), (rect.x_hi, rect.y_hi)),
                   ((rect.x_hi, rect.y_hi), (rect.x_lo, rect.y_hi)),
                   ((rect.x_lo, rect.y_hi), (rect.x_lo, rect.y_lo))]:
        a, b = complex(*z0), complex(*z1)
        n = int(math.ceil(abs(b - a) / step))
        z = a + (b - a) * np.linspace(0, 1, n + 1)
        with np.errstate(all="ignore"):
            r = np.abs(f.values(z) / df.values(z))
        r = np.where(np.isfinite(r), r, np.inf)
        out = min(out, float(r.min()) / step)
    return out


def count_zeros_rect(f: BandlimitedFunction, rect: RectContour, cfg=None, retries: int = 3) -> int:
    """Zeros (with multiplicity) in the closed rectangle via the argument principle."""
    return _count(f, rect, retries)[0]


def _boundary_step(f, rect):
    short = min(rect.x_hi - rect.x_lo, rect.y_hi - rect.y_lo)
    return min(math.pi / (32 * f.sigma_nominal), short / 4)


def _count(f, rect, retries=3):
    """Count plus the rectangle actually integrated.

    A zero on the boundary is kept inside: the edges move outward by
    1, 2, 4 boundary sample spacings until the contour is clear.
    """
    current = rect
    last = None
    d = _boundary_step(f, rect)
    for k in range(retries + 1):
        if _boundary_clearance(f, current) >= CLEARANCE:
            val, err, ok = _contour_moment(f, current)
            n = round(val.real)
            last = val
            if ok and abs(val.real - n) <= 0.25 and abs(val.imag) <= 0.25:
                return int(n), current
        current = rect.grown(d * 2**k)
    raise ContourError(f"argument principle failed near the boundary of {rect} (last value {last})")


def complex_zeros(f: BandlimitedFunction, rect: RectContour, cfg=None, depth: int = 0) -> ZeroSet:
    """Locate all zeros inside a rectangle by recursive subdivision."""
    zeros = _complex_zeros(f, rect, depth)
    return ZeroSet.build(zeros, (rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi))


def _split(f, rect):
    w, hgt = rect.x_hi - rect.x_lo, rect.y_hi - rect.y_lo
    parts = []
    # off-center cuts; take the first one that keeps clear of zeros
    for frac in (0.5137, 0.4561, 0.5719, 0.4129, 0.6043):
        if w >= hgt:
            xm = rect.x_lo + frac * w
            parts = [RectContour(rect.x_lo, xm, rect.y_lo, rect.y_hi), RectContour(xm, rect.x_hi, rect.y_lo, rect.y_hi)]
        else:
            ym = rect.y_lo + frac * hgt
            parts = [RectContour(rect.x_lo, rect.x_hi, rect.y_lo, ym), RectContour(rect.x_lo, rect.x_hi, ym, rect.y_hi)]
        if min(_boundary_clearance(f, p) for p in parts) >= CLEARANCE:
            break
    return parts


def _complex_zeros(f, rect, depth):
    n, rect = _count(f, rect)
    if n == 0:
        return []
    w, hgt = rect.x_hi - rect.x_lo, rect.y_hi - rect.y_lo
    small = max(w, hgt) < 0.5 / f.sigma_nominal
    if (n == 1 and small) or depth > 40:
        s1, _, _ = _contour_moment(f, rect, power=1)
        z = complex(s1) / n
        df = differentiate(f)
        for _ in range(20):
            step = complex(f.values(np.array([z]))[0] / df.values(np.array([z]))[0])
            if not np.isfinite(step):
                break
            z -= step
            if abs(step) < 1e-15 * (1 + abs(z)):
                break
        res = float(abs(f.values(np.array([z]))[0]))
        return [Zero(z, n, abs(z.imag) <= REALNESS_TOL, res, True)]
    out = []
    for p in _split(f, rect):
        out += _complex_zeros(f, p, depth + 1)
    return out


def detect_conjugate_pairs(zs: ZeroSet, tol: float = 1e-6) -> list[tuple[complex, complex]]:
    """Pairs (lam, conj lam) with Im lam > tol, both present in the set."""
    locs = zs.locations
    pairs = []
    for lam in locs:
        if lam.imag <= tol:
            continue
        if np.any(np.abs(locs - np.conj(lam)) <= tol * (1 + abs(lam))):
            pairs.append((complex(lam), complex(np.conj(lam))))
    return pairs


def separation_gap(zs: ZeroSet) -> float:
    real = zs.real_locations
    if len(real) < 2:
        raise ValueError("separation gap needs at least two real zeros")
    return float(np.min(np.diff(np.sort(real))))
