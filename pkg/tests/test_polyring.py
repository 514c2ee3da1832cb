from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import from_sympy, gauss, poly_pairs, polynomials, to_sympy
from kohnspec.polyring import (
    DimensionMismatch,
    GaussianRational,
    Monomial,
    Polynomial,
    bidegree,
    diff,
    laplacian,
    parse_polynomial,
    poly_arith,
    reduce_mod_sphere,
    sphere_norm,
)

GOLDEN = Path(__file__).parent / "golden"

z = Polynomial.z
w = Polynomial.zbar


# -- GaussianRational ---------------------------------------------------------


def test_gauss_canonical():
    x = GaussianRational(Fraction(2, 4), Fraction(-6, 3))
    assert x.re == Fraction(1, 2) and x.im == -2
    assert x == GaussianRational.parse("1/2-2*i")


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("1/2", Fraction(1, 2), 0),
        ("(1/2+3/4*i)", Fraction(1, 2), Fraction(3, 4)),
        ("-i", 0, -1),
        ("2*i", 0, 2),
        ("-3/2-1/5*i", Fraction(-3, 2), Fraction(-1, 5)),
        ("0.5", Fraction(1, 2), 0),
    ],
)
def test_gauss_parse(text, re, im):
    assert GaussianRational.parse(text) == GaussianRational(re, im)


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "1+"])
def test_gauss_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        GaussianRational.parse(bad)


@given(gauss, gauss, gauss)
def test_gauss_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).im == 0 and (a * a.conjugate()).re == a.abs2()
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_gauss_text_roundtrip(a):
    assert GaussianRational.parse(a.to_text()) == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


# -- arithmetic ---------------------------------------------------------------


def test_additive_cancellation():
    assert poly_arith(z(1, 2) + w(2, 2), -w(2, 2), "add") == z(1, 2)


def test_monomial_product():
    assert poly_arith(z(1, 2), w(1, 2), "mul") == Polynomial.monomial((1, 0), (1, 0))


def test_difference_of_squares():
    lhs = poly_arith(z(1, 2) + z(2, 2), z(1, 2) - z(2, 2), "mul")
    assert lhs == z(1, 2) ** 2 - z(2, 2) ** 2


def test_mismatched_nvars():
    with pytest.raises(DimensionMismatch):
        poly_arith(z(1, 2), z(1, 3), "add")


def test_zero_coefficients_are_dropped():
    f = Polynomial(2, [((1, 0, 0, 0), 1), ((1, 0, 0, 0), -1), ((0, 1, 0, 0), 0)])
    assert f.is_zero() and len(f) == 0 and f == Polynomial.zero(2)


@settings(max_examples=60)
@given(poly_pairs(3))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Polynomial.zero(f.nvars)
    assert f * Polynomial.constant(1, f.nvars) == f


@settings(max_examples=40)
@given(poly_pairs(2))
def test_product_matches_sympy(fg):
    f, g = fg
    ef, _, _ = to_sympy(f)
    eg, _, _ = to_sympy(g)
    assert f * g == from_sympy(ef * eg, f.nvars)


@given(polynomials())
def test_conjugate_involution(f):
    assert f.conjugate().conjugate() == f


# -- calculus -----------------------------------------------------------------


def test_power_rule():
    f = Polynomial.monomial((2, 0), (0, 1))
    assert diff(f, "z1") == Polynomial.monomial((1, 0), (0, 1), 2)


def test_independent_variables():
    assert diff(z(1, 2), "w1").is_zero()
    assert diff(z(1, 2) * w(1, 2), "w1") == z(1, 2)


@settings(max_examples=40)
@given(polynomials(2), st.sampled_from(["z1", "z2", "w1", "w2"]))
def test_diff_matches_sympy(f, var):
    expr, zs, ws = to_sympy(f)
    sym = dict(zip([f"z{i}" for i in (1, 2)] + [f"w{i}" for i in (1, 2)], zs + ws))[var]
    assert diff(f, var) == from_sympy(sympy.diff(expr, sym), 2)


@given(polynomials(3))
def test_mixed_partials_commute(f):
    assert f.dz(1).dzbar(2) == f.dzbar(2).dz(1)
    assert f.dz(3).dz(1) == f.dz(1).dz(3)


@given(poly_pairs(2))
def test_leibniz(fg):
    f, g = fg
    for i in range(1, f.nvars + 1):
        assert (f * g).dzbar(i) == f.dzbar(i) * g + f * g.dzbar(i)


def test_laplacian_examples():
    assert laplacian(z(1, 2) * w(1, 2)) == Polynomial.constant(4, 2)
    assert laplacian(z(1, 2) ** 2).is_zero()
    assert laplacian(z(1, 2) * w(1, 2) - z(2, 2) * w(2, 2)).is_zero()


@settings(max_examples=40)
@given(polynomials(2))
def test_laplacian_matches_sympy(f):
    expr, zs, ws = to_sympy(f)
    lap = 4 * sum(sympy.diff(expr, a, b) for a, b in zip(zs, ws))
    assert laplacian(f) == from_sympy(lap, 2)


# -- sphere normal form -------------------------------------------------------


def test_reduce_examples():
    for n in (1, 2, 3):
        assert reduce_mod_sphere(sphere_norm(n)) == Polynomial.constant(1, n)
    assert reduce_mod_sphere(z(2, 2)) == z(2, 2)


@given(polynomials(max_exp=3))
def test_reduce_is_normal_form(f):
    r = reduce_mod_sphere(f)
    n = f.nvars
    assert all(min(k[0], k[n]) == 0 for k in r.terms)
    assert reduce_mod_sphere(r) == r


@settings(max_examples=50)
@given(poly_pairs(2))
def test_reduce_is_ring_map(fg):
    f, g = fg
    rf, rg = reduce_mod_sphere(f), reduce_mod_sphere(g)
    assert reduce_mod_sphere(f * g) == reduce_mod_sphere(rf * rg)
    assert reduce_mod_sphere(f + g) == rf + rg


@given(polynomials())
def test_multiples_of_relation_vanish(f):
    rel = sphere_norm(f.nvars) - Polynomial.constant(1, f.nvars)
    assert reduce_mod_sphere(f * rel).is_zero()


# -- bidegree and ordering ----------------------------------------------------


def test_bidegree_examples():
    assert bidegree(Polynomial.monomial((2, 0), (0, 1))) == (2, 1)
    assert bidegree(z(1, 2) + w(1, 2)) == "inhomogeneous"
    assert bidegree(Polynomial.monomial((1, 0), (3, 0))) == (1, 3)


def test_bidegree_of_zero():
    with pytest.raises(ValueError):
        bidegree(Polynomial.zero(2))


def test_monomial_validation():
    assert Monomial((2, 0), (0, 1)).bidegree == (2, 1)
    with pytest.raises(ValueError):
        Monomial((1, -1), (0, 0))
    with pytest.raises(DimensionMismatch):
        Monomial((1,), (0, 0))


def test_order_is_graded_lex():
    f = z(1, 2) + z(2, 2) ** 2 + w(1, 2) * z(2, 2) + Polynomial.constant(1, 2)
    keys = [k for k, _ in f.items()]
    assert keys == [(0, 2, 0, 0), (0, 1, 1, 0), (1, 0, 0, 0), (0, 0, 0, 0)]


# -- serialization ------------------------------------------------------------


def test_text_format():
    f = Polynomial.monomial((2, 0), (0, 1))
    assert f.to_text() == "(1/1)*z1^2*w2^1"
    g = f.scale(GaussianRational(Fraction(-1, 2), Fraction(3, 4))) + Polynomial.constant(Fraction(2, 3), 2)
    assert g.to_text() == "(-1/2+3/4*i)*z1^2*w2^1 + (2/3)"


def test_golden_serialization():
    # (z1 - i*w2)^2 * (1/2 + w1), written once and frozen
    n = 2
    f = (z(1, n) - w(2, n).scale(GaussianRational(0, 1))) ** 2 * (Polynomial.constant(Fraction(1, 2), n) + w(1, n))
    expected = (GOLDEN / "poly_text.txt").read_text().strip()
    assert f.to_text() == expected
    assert parse_polynomial(expected, n) == f


@given(polynomials())
def test_text_roundtrip(f):
    assert parse_polynomial(f.to_text(), f.nvars) == f
