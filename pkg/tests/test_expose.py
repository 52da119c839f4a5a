import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bernstein_lab.expose import (
    ExposeConfig,
    PreconditionError,
    Prop33Verdict,
    Verdict,
    classify_exposedness,
    condition_32_search,
    estimate_type,
    prop33_classify,
    sine_type_check,
)
from bernstein_lab.funcat import Polynomial, linear_combination, make_catalog
from bernstein_lab.funcat.catalog import canonical_q
from bernstein_lab.funcat.expr import PolyFactor
from bernstein_lab.funcat.function import BandlimitedFunction

from conftest import MEMBERS, member

PI = math.pi


@pytest.fixture(scope="module")
def reports():
    return {label: classify_exposedness(member(label)) for label, _, _ in MEMBERS}


# estimate_type

def test_type_two_cos():
    assert abs(estimate_type(make_catalog("two_cos_minus_one")) - PI) <= 0.01


def test_type_polynomial():
    assert abs(estimate_type(make_catalog("polynomial", {"roots": [1, -1]}))) <= 0.01


def test_type_exp_line():
    assert abs(estimate_type(make_catalog("exp_line")) - PI) <= 0.01


def test_type_sigma2_members():
    for label in ("thm46_s2", "example34_s2"):
        assert abs(estimate_type(member(label)) - 2.0) <= 0.02


def test_type_requires_range():
    with pytest.raises(ValueError):
        estimate_type(make_catalog("sine"), y_max=1.0)


def test_type_invariant_under_polynomial_factor():
    F = make_catalog("example34_F")
    base = estimate_type(F)
    times_one = linear_combination([(1.0, F), (0.0, make_catalog("exp_line", {"a": 0.0}))])
    assert abs(estimate_type(times_one) - base) <= 0.01
    pf = BandlimitedFunction(PolyFactor(F.expr, Polynomial.from_roots([2.0, -1j, 0.5])), F.sigma_nominal)
    assert abs(estimate_type(pf) - base) <= 0.01


# sine type

def test_sine_type_two_cos():
    cert = sine_type_check(make_catalog("two_cos_minus_one"), PI, 2.0)
    assert cert.ok and cert.c1 >= 0.998 and cert.c2 <= 1.002
    assert 0 < cert.c1 <= cert.c2


def test_sine_type_one_sided_fails():
    res = sine_type_check(make_catalog("exp_line"), PI, 2.0)
    assert not res.ok
    assert res.point.imag > 0 and res.value < res.threshold


def test_sine_type_sine():
    cert = sine_type_check(make_catalog("sine"), PI, 2.0)
    assert cert.ok
    assert abs(cert.c1 - 0.5) <= 0.002 and abs(cert.c2 - 0.5) <= 0.002


def test_sine_type_needs_positive_K():
    with pytest.raises(ValueError):
        sine_type_check(make_catalog("sine"), PI, 0.0)


@given(st.floats(0, 2 * PI))
def test_sine_type_scale_invariance(phase):
    F = make_catalog("example34_F")
    c = 2 * complex(math.cos(phase), math.sin(phase))
    a = sine_type_check(F, PI, 2.0)
    b = sine_type_check(F.scaled(c), PI, 2.0)
    assert a.ok and b.ok
    assert b.c1 == pytest.approx(2 * a.c1, rel=1e-12)
    assert b.c2 == pytest.approx(2 * a.c2, rel=1e-12)


# polynomial-weight infimum search

def test_cond32_thm46():
    res = condition_32_search(member("thm46"), tau_grid=[2.0], y0_grid=[2.0])
    assert res.passed and res.inf_value > 0
    assert res.inf_value >= res.threshold


def test_cond32_deg4_fails_everywhere():
    f = member("quotient_deg4")
    res = condition_32_search(f)
    assert not res.passed
    assert all(not row[3] for row in res.grid)
    assert {row[0] for row in res.grid} >= {3.0}


def test_cond32_example34():
    res = condition_32_search(member("example34"), tau_grid=[2.0], y0_grid=[3.0])
    assert res.passed


def test_cond32_validation():
    f = member("thm46")
    with pytest.raises(ValueError):
        condition_32_search(f, tau_grid=[3.5])
    with pytest.raises(ValueError):
        condition_32_search(f, tau_grid=[0.0])
    with pytest.raises(ValueError):
        condition_32_search(f, x_max=10.0)


def test_cond32_sigma2():
    res = condition_32_search(member("thm46_s2"))
    assert res.passed


# classification

def test_classify_example34(reports):
    r = reports["example34"]
    assert r.verdict is Verdict.EXPOSED_BY_THM31
    assert r.type_ok and r.conjugate_free and r.real_zeros_simple and r.cond32.passed


def test_classify_sinc_square(reports):
    r = reports["sinc_sq"]
    assert r.verdict is Verdict.NOT_EXPOSED_BY_THM21
    assert not r.real_zeros_simple
    assert r.evidence["multiple_real_zeros"]


def test_classify_deg4_inconclusive(reports):
    assert reports["quotient_deg4"].verdict is Verdict.INCONCLUSIVE


def test_classify_thm46(reports):
    assert reports["thm46"].verdict is Verdict.EXPOSED_BY_THM31
    assert reports["thm46_s2"].verdict is Verdict.EXPOSED_BY_THM31


def test_classify_conjugate_zeros():
    # cos(pi z) - 2 has zeros 2k +- i acosh(2)/pi inside the strip
    f = linear_combination([(0.5, make_catalog("two_cos_minus_one")),
                            (-1.5, make_catalog("exp_line", {"a": 0.0}))])
    f = BandlimitedFunction(f.expr, PI)
    r = classify_exposedness(f)
    assert not r.conjugate_free
    assert r.verdict is Verdict.NOT_EXPOSED_BY_THM21
    assert r.evidence["conjugate_pairs"]


def test_verdict_soundness(reports):
    for r in reports.values():
        if r.verdict is Verdict.EXPOSED_BY_THM31:
            assert r.type_ok and r.conjugate_free and r.real_zeros_simple and r.cond32.passed
        if r.verdict is Verdict.NOT_EXPOSED_BY_THM21:
            assert not (r.type_ok and r.conjugate_free and r.real_zeros_simple)


def test_report_serializes(reports):
    import json

    d = reports["example34"].to_dict()
    json.dumps(d)
    assert d["verdict"] == "ExposedByThm31"


# degree rule

F_TWO_COS = make_catalog("two_cos_minus_one")


@pytest.mark.parametrize("sigma", [PI, 2.0])
def test_prop33_examples(sigma):
    F = make_catalog("two_cos_minus_one", {"sigma": sigma})
    r2 = prop33_classify(F, canonical_q(sigma, 2))
    assert r2.verdict is Prop33Verdict.EXPOSED and r2.confirmed
    r1 = prop33_classify(F, canonical_q(sigma, 1))
    assert r1.verdict is Prop33Verdict.NOT_IN_SPACE and r1.confirmed
    r4 = prop33_classify(F, canonical_q(sigma, 4))
    assert r4.verdict is Prop33Verdict.NOT_EXPOSED and r4.confirmed
    assert r4.evidence["multiplier_converged"]


def test_prop33_deg3_and_example34_F():
    assert prop33_classify(F_TWO_COS, canonical_q(PI, 3)).verdict is Prop33Verdict.EXPOSED
    F = make_catalog("example34_F")
    q = Polynomial.from_roots([1.0, -1.0], PI**2)
    assert prop33_classify(F, q).verdict is Prop33Verdict.EXPOSED


def test_prop33_preconditions():
    # q zero that is not a zero of F
    with pytest.raises(PreconditionError):
        prop33_classify(F_TWO_COS, Polynomial.from_roots([0.3, -1 / 3]), hooks=False)
    # not sine type
    with pytest.raises(PreconditionError):
        prop33_classify(make_catalog("exp_line"), Polynomial.from_roots([]), hooks=False)
    # double zero taken twice exceeds F's multiplicity
    with pytest.raises(PreconditionError):
        prop33_classify(F_TWO_COS, Polynomial.from_roots([1 / 3, 1 / 3]), hooks=False)


def test_prop33_multiple_real_zero_rejected():
    # sin^2 is sine type of type 2 pi but has double zeros
    s = make_catalog("sine")
    from bernstein_lab.funcat.expr import IntegerPower

    F = BandlimitedFunction(IntegerPower(s.expr, 2), 2 * PI)
    with pytest.raises(PreconditionError):
        prop33_classify(F, Polynomial.from_roots([0.0, 0.0]), hooks=False)


def test_prop33_agrees_with_classifier(reports):
    mapping = {Verdict.EXPOSED_BY_THM31: Prop33Verdict.EXPOSED,
               Verdict.NOT_EXPOSED_BY_THM21: Prop33Verdict.NOT_EXPOSED}
    for label, degree in (("quotient_deg2", 2), ("quotient_deg3", 3), ("quotient_deg4", 4)):
        r = reports[label]
        if r.verdict is Verdict.INCONCLUSIVE:
            continue
        p = prop33_classify(F_TWO_COS, canonical_q(PI, degree), hooks=False)
        assert mapping[r.verdict] is p.verdict
