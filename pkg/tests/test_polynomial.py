import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bernstein_lab.funcat import Polynomial


def test_from_roots_coefficients_ascending():
    p = Polynomial.from_roots([1.0, -1.0])
    assert np.allclose(p.coefficients, [-1, 0, 1])
    assert p.degree == 2


def test_leading_coefficient_nonzero():
    with pytest.raises(ValueError):
        Polynomial((1.0, 0.0))


def test_degree_above_four_rejected():
    p = Polynomial((1, 0, 0, 0, 0, 1))
    with pytest.raises(ValueError):
        p.roots


def test_factored_form_vanishes_exactly():
    r = [0.1 + 0.3j, 2.0 / 3, np.pi]
    p = Polynomial.from_roots(r, 2.5)
    assert np.all(p(np.array(r)) == 0)


def test_derivative_of_square():
    d = Polynomial.monomial(2).derivative()
    assert d(1.0) == pytest.approx(2.0)
    assert Polynomial((3.0,)).derivative() is None


def test_root_clusters_multiplicity():
    p = Polynomial(tuple(Polynomial.from_roots([0.5, 0.5, -2]).coefficients))
    clusters = p.root_clusters(1e-6)
    mult = sorted(m for _, m in clusters)
    assert mult == [1, 2]


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=4),
       st.floats(0.5, 3.0))
def test_roots_from_coefficients_are_zeros(roots, lead):
    # rebuild from coefficients only, so the companion-matrix path is used
    p = Polynomial(Polynomial.from_roots(roots, lead).coefficients)
    scale = lead * (1 + max(abs(r) for r in roots)) ** len(roots)
    for z in p.roots:
        assert abs(p(z)) <= 1e-7 * scale
    assert len(p.roots) == len(roots)


@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=3),
       st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=3))
def test_product_evaluates_as_product(r1, r2):
    p, q = Polynomial.from_roots(r1), Polynomial.from_roots(r2)
    z = np.array([0.3 + 0.2j, -1.1, 2j])
    assert np.allclose((p * q)(z), p(z) * q(z))
    assert np.allclose(p.conjugate()(np.conj(z)), np.conj(p(z)))
