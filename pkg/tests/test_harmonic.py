from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import poly_pairs, polynomials
from kohnspec import exact
from kohnspec.crops import OneForm
from kohnspec.harmonic import (
    BigradedSignature,
    dim_hpq,
    dim_hpq_difference,
    harmonic_basis,
    hstar_element,
    laplacian_nullity,
    monomial_basis,
    monomial_integral,
    oneform_inner_product,
    sphere_inner_product,
)
from kohnspec.polyring import GaussianRational, Monomial, Polynomial, laplacian, reduce_mod_sphere, sphere_norm

z = Polynomial.z
w = Polynomial.zbar


def span_rank(polys):
    keys = sorted({k for f in polys for k in f.terms})
    col = {k: i for i, k in enumerate(keys)}
    return exact.rank([{col[k]: c for k, c in f.terms.items()} for f in polys])


# -- dimensions ---------------------------------------------------------------


@pytest.mark.parametrize("n, p, q, dim", [(2, 1, 1, 3), (1, 2, 3, 0), (2, 0, 1, 2), (1, 0, 4, 1), (3, 2, 2, 27)])
def test_dim_examples(n, p, q, dim):
    assert dim_hpq(n, p, q) == dim


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dim_matches_kernel(n):
    for p in range(4):
        for q in range(4):
            assert len(harmonic_basis(n, p, q)) == dim_hpq(n, p, q)


def test_dim_forms_agree():
    for n in range(1, 6):
        for p in range(1, 7):
            for q in range(1, 7):
                assert dim_hpq(n, p, q) == dim_hpq_difference(n, p, q)


@pytest.mark.parametrize("n, degree", [(2, 3), (3, 2)])
def test_nullity_without_bigrading(n, degree):
    # the full-degree kernel decomposes over bidegrees
    assert laplacian_nullity(n, degree) == sum(dim_hpq(n, p, degree - p) for p in range(degree + 1))


def test_dim_rejects_negative():
    with pytest.raises(ValueError):
        dim_hpq(2, -1, 0)


# -- monomial basis -----------------------------------------------------------


def test_monomial_basis_examples():
    assert monomial_basis(2, 1, 0) == [Monomial((1, 0), (0, 0)), Monomial((0, 1), (0, 0))]
    assert monomial_basis(2, 1, 1) == [
        Monomial((1, 0), (1, 0)),
        Monomial((1, 0), (0, 1)),
        Monomial((0, 1), (1, 0)),
        Monomial((0, 1), (0, 1)),
    ]
    assert monomial_basis(1, 0, 2) == [Monomial((0,), (2,))]


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
def test_monomial_count(n, p, q):
    basis = monomial_basis(n, p, q)
    assert len(basis) == comb(n + p - 1, p) * comb(n + q - 1, q)
    assert len(set(basis)) == len(basis)


# -- harmonic basis -----------------------------------------------------------


def test_antiholomorphic_basis():
    assert set(harmonic_basis(2, 0, 1)) == {w(1, 2), w(2, 2)}


def test_h11_span():
    basis = list(harmonic_basis(2, 1, 1))
    expected = [z(1, 2) * w(2, 2), z(2, 2) * w(1, 2), z(1, 2) * w(1, 2) - z(2, 2) * w(2, 2)]
    assert len(basis) == 3
    assert span_rank(basis) == 3 and span_rank(basis + expected) == 3


def test_n1_has_no_mixed_harmonics():
    assert len(harmonic_basis(1, 1, 1)) == 0
    assert list(harmonic_basis(1, 3, 0)) == [z(1, 1) ** 3]


@pytest.mark.parametrize("n, p, q", [(2, 2, 2), (3, 1, 2), (3, 2, 1)])
def test_basis_is_harmonic_and_independent(n, p, q):
    basis = list(harmonic_basis(n, p, q))
    assert all(laplacian(e).is_zero() and e.bidegree() == (p, q) for e in basis)
    assert span_rank(basis) == len(basis)


def test_basis_is_deterministic():
    assert harmonic_basis(3, 2, 2) == harmonic_basis(3, 2, 2)


# -- H* ------------------------------------------------------------------------


def test_hstar_examples():
    assert hstar_element(BigradedSignature((2, 0), (0, 2))) == Polynomial.monomial((2, 0), (0, 2))
    assert hstar_element(BigradedSignature((2, 1), (3, 2))) is None
    assert laplacian(Polynomial.monomial((2, 1), (3, 2))) != Polynomial.zero(2)
    assert hstar_element(BigradedSignature((0, 0), (0, 0))) == Polynomial.constant(1, 2)


def test_hstar_mixed_variable_is_zero_space():
    # z2 zbar2 appears, so z1^2 z2 zbar2^2 is not harmonic
    sig = BigradedSignature((2, 1), (0, 2))
    assert not sig.is_admissible()
    assert hstar_element(sig) is None
    assert not laplacian(Polynomial.monomial((2, 1), (0, 2))).is_zero()


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3))
def test_hstar_harmonic_iff_admissible(pairs):
    pvec, qvec = zip(*pairs)
    f = Polynomial.monomial(pvec, qvec)
    assert (hstar_element(BigradedSignature(pvec, qvec)) is not None) == laplacian(f).is_zero()


# -- inner products -----------------------------------------------------------


def test_inner_product_examples():
    one = Polynomial.constant(1, 2)
    assert sphere_inner_product(one, one) == 1
    assert sphere_inner_product(z(1, 2), z(2, 2)) == 0
    assert sphere_inner_product(z(1, 2), z(1, 2)) == Fraction(1, 2)


def test_unit_mass_constraint():
    for n in (1, 2, 3, 4):
        total = sum((sphere_inner_product(z(i, n), z(i, n)) for i in range(1, n + 1)), GaussianRational(0))
        assert total == 1


def test_monomial_integrals_monte_carlo():
    # independent numerical oracle: uniform points on S^5
    rng = np.random.default_rng(7)
    x = rng.standard_normal((400_000, 6))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    zc = x[:, :3] + 1j * x[:, 3:]
    for alpha in [(1, 0, 0), (2, 1, 0), (1, 1, 1), (3, 0, 1)]:
        vals = np.prod(np.abs(zc) ** (2 * np.array(alpha)), axis=1)
        mc = vals.mean()
        se = vals.std() / np.sqrt(len(vals))
        assert abs(mc - float(monomial_integral(alpha + alpha))) < 6 * se


@settings(max_examples=40)
@given(poly_pairs(2, nvars=2))
def test_inner_product_hermitian(fg):
    f, g = fg
    assert sphere_inner_product(f, g) == sphere_inner_product(g, f).conjugate()
    assert sphere_inner_product(f, f).im == 0 and sphere_inner_product(f, f).re >= 0


@settings(max_examples=40)
@given(poly_pairs(2, nvars=2))
def test_inner_product_respects_sphere(fg):
    f, g = fg
    assert sphere_inner_product(f * sphere_norm(2), g) == sphere_inner_product(f, g)
    assert sphere_inner_product(reduce_mod_sphere(f), g) == sphere_inner_product(f, g)


@given(polynomials(2), polynomials(2), st.sampled_from([GaussianRational(0, 1), GaussianRational(Fraction(2, 3), -1)]))
def test_inner_product_sesquilinear(f, g, c):
    assert sphere_inner_product(f.scale(c), g) == c * sphere_inner_product(f, g)
    assert sphere_inner_product(f, g.scale(c)) == c.conjugate() * sphere_inner_product(f, g)


def test_oneform_normalisation():
    n = 2
    assert oneform_inner_product(OneForm.dzbar(1, n), OneForm.dzbar(1, n)) == 2
    assert oneform_inner_product(OneForm.dzbar(1, n), OneForm.dzbar(2, n)) == 0
    assert oneform_inner_product(OneForm.dz(1, n), OneForm.dzbar(1, n)) == 0
    zdz = OneForm.dzbar(1, n, z(1, n))
    assert oneform_inner_product(zdz, zdz) == 1
