import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import sici, zeta

from bernstein_lab.funcat import make_catalog, normalize
from bernstein_lab.functionals import ConstantMean
from bernstein_lab.quad import (
    QuadratureConfig,
    _tail_extrapolate,
    abs_integral_on_line,
    fit_log_growth,
    integrate_line,
    interval_mass,
    norm_cauchy_tail,
    pair_integral,
    truncated_partials,
)

from conftest import MEMBERS, member

PI = math.pi


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(truncation_radius=-1)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tolerance=0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
    assert QuadratureConfig().radius(PI) == pytest.approx(200.0)


def test_sinc_square_integral():
    # int sin^2(a x)/x^2 = pi a with a = pi/2
    res = abs_integral_on_line(make_catalog("shifted_sinc_sq"))
    assert res.converged and res.error_estimate <= 1e-8
    assert abs(res.value - PI**2 / 2) <= 1e-8


def _sinc_partial_oracle(R):
    # int_{-R}^{R} |sin(pi x)|/(pi |x|) summed unit by unit through Si
    k = np.arange(int(R) + 1)
    si = sici(PI * k)[0]
    return 2 / PI * np.abs(np.diff(si)).sum()


def test_sinc_divergence_diagnostic():
    res = abs_integral_on_line(make_catalog("sinc"))
    assert not res.converged
    d = res.diagnostic
    assert d["status"] == "diverged"
    # mean of |sin| is 2/pi, two sides, 1/(pi x) envelope
    assert abs(d["B"] - 4 / PI**2) <= 0.01 * 4 / PI**2
    assert d["fit_residual"] <= 0.05


def test_sinc_partials_against_si_oracle():
    radii = [1e2, 1e3, 1e4]
    got = truncated_partials(make_catalog("sinc"), radii)
    want = [_sinc_partial_oracle(R) for R in radii]
    assert np.allclose(got, want, rtol=0, atol=1e-8)
    # growth per decade approaches (4/pi^2) log 10
    assert abs((want[2] - want[1]) - 4 / PI**2 * math.log(10)) <= 1e-3


def test_deg1_quotient_not_convergent():
    res = abs_integral_on_line(make_catalog("sinetype_quotient", {"degree": 1}))
    assert not res.converged and res.diagnostic["status"] == "diverged"


def test_plancherel_polya_thm46_a1():
    f = member("thm46")
    res = abs_integral_on_line(f, 1.0)
    assert res.converged
    assert res.value <= math.exp(PI) * (1 + 1e-6)


@pytest.mark.parametrize("label", [m[0] for m in MEMBERS])
@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_plancherel_polya_catalog(label, a):
    f = member(label)
    res = abs_integral_on_line(f, a)
    assert res.converged
    assert res.value <= math.exp(f.sigma_nominal * a) * (1 + 1e-6)
    # and the shifted line norm is at least the real-line norm
    assert res.value >= 1 - 1e-8


@pytest.mark.parametrize("label", [m[0] for m in MEMBERS])
def test_normalized_norm_is_one(label):
    res = abs_integral_on_line(member(label))
    assert res.converged and abs(res.value - 1) <= 1e-8


def test_pair_constant_weight():
    g = make_catalog("shifted_sinc_sq")
    res = pair_integral(g, ConstantMean(-1 / 3))
    assert abs(res.value + PI**2 / 6) <= 1e-8
    assert pair_integral(g, ConstantMean(0.0)).value == 0


def test_pair_unimodular_self():
    from bernstein_lab.functionals import Unimodular

    f = member("example34")
    res = pair_integral(f, Unimodular(f))
    assert abs(res.value - 1) <= 1e-8


@pytest.mark.parametrize("label", ["thm46", "example34", "quotient_deg3", "sinc_sq_shift7"])
def test_pair_triangle_bound(label):
    from bernstein_lab.functionals import Indicator, Unimodular

    g = member(label)
    norm = abs_integral_on_line(g).value
    cfg = QuadratureConfig()
    for w in (Unimodular(member("thm46")), Indicator(-0.4, 2.2, 1 - 1j), ConstantMean(0.7j)):
        res = pair_integral(g, w, cfg)
        assert abs(res.value) <= w.sup_norm * norm + 2 * cfg.abs_tolerance


def test_interval_mass_consistency():
    g = member("thm46")
    R = QuadratureConfig().radius(PI)
    full = abs_integral_on_line(g).value
    inner = interval_mass(g, -R, R)
    assert 0 <= inner <= full + 1e-8
    assert abs(interval_mass(g, -math.inf, math.inf) - full) <= 1e-8
    # the tail beyond R decays like 1/R
    assert full - inner <= 2e-3


def test_interval_mass_half_line_symmetry():
    g = member("sinc_sq")
    assert abs(interval_mass(g, 0.0, math.inf) - 0.5) <= 1e-8
    assert abs(interval_mass(g, -math.inf, 0.0) - 0.5) <= 1e-8


def test_interval_mass_requires_order():
    with pytest.raises(ValueError):
        interval_mass(member("thm46"), 1.0, 0.0)


@given(st.floats(-30, 30), st.floats(0, 10), st.floats(0, 10))
def test_interval_mass_monotone(u, d1, d2):
    g = member("example34")
    inner = interval_mass(g, u, u + d1)
    outer = interval_mass(g, u - d2, u + d1 + d2)
    assert 0 <= inner <= outer + 1e-12


def test_empirical_local_mass_constant():
    # |g(x)| <= (sigma/pi) ||g||_1 for g of type sigma, so the ratio stays below sigma/pi
    rng = np.random.default_rng(3)
    worst = 0.0
    for label in ("thm46", "example34", "quotient_deg3", "sinc_sq", "thm46_s2"):
        g = member(label)
        for _ in range(20):
            u = rng.uniform(-10, 10)
            h = rng.uniform(0.01, 0.5)
            worst = max(worst, interval_mass(g, u, u + h) / h)
            assert interval_mass(g, u, u + h) / h <= g.sigma_nominal / PI * (1 + 1e-9)
    assert 0 < worst < math.inf


def test_determinism():
    f = member("example34_eps15")
    a = abs_integral_on_line(f, 0.5)
    b = abs_integral_on_line(f, 0.5)
    assert a.value == b.value and a.error_estimate == b.error_estimate


def test_converged_implies_tolerance():
    cfg = QuadratureConfig(abs_tolerance=1e-10)
    for label in ("thm46", "example34", "quotient_deg2"):
        res = abs_integral_on_line(member(label), 0.0, cfg)
        assert not res.converged or res.error_estimate <= cfg.abs_tolerance


def test_tail_extrapolation_exact_for_power_law():
    # blocks of 1/x^2 and 1/x^3 from R on; the remainder is a Hurwitz zeta sum
    R, L, K = 100.0, 4.0, 24
    k = np.arange(K)
    blocks = (R / (R + L * k)) ** 2 + 0.3 * (R / (R + L * k)) ** 3
    val, err = _tail_extrapolate(blocks, R, L, 2.0)
    want = (R / L) ** 2 * zeta(2, K + R / L) + 0.3 * (R / L) ** 3 * zeta(3, K + R / L)
    assert abs(val - want) <= 1e-10 * want
    assert err <= 1e-8 * want


def test_integrate_line_smooth_oracle():
    # int 1/(1+x^2) = pi on the line; half line from 0
    res = integrate_line(lambda x: 1 / (1 + x * x), sigma=1.0, decay=2.0, cfg=QuadratureConfig())
    assert abs(res.value - PI) <= 1e-9
    half = integrate_line(lambda x: 1 / (1 + x * x), sigma=1.0, decay=2.0, cfg=QuadratureConfig(), lo=0.0)
    assert abs(half.value - PI / 2) <= 1e-9


def test_fit_log_growth_recovers_law():
    r = np.geomspace(10, 1000, 9)
    fit = fit_log_growth(r, 2.0 + 0.5 * np.log(r))
    assert fit["B"] == pytest.approx(0.5) and fit["fit_residual"] <= 1e-12


@pytest.mark.parametrize("label", ["quotient_deg2", "quotient_deg3", "quotient_deg4", "thm46"])
def test_norm_cauchy_tail_small(label):
    assert norm_cauchy_tail(member(label)) <= 1e-6
