from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from kohnspec.polyring import GaussianRational, Polynomial

small_frac = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gauss = st.builds(GaussianRational, small_frac, small_frac)


@st.composite
def polynomials(draw, nvars: int | None = None, max_terms: int = 4, max_exp: int = 2):
    n = draw(st.integers(1, 3)) if nvars is None else nvars
    key = st.tuples(*[st.integers(0, max_exp)] * (2 * n))
    terms = draw(st.lists(st.tuples(key, gauss), max_size=max_terms))
    return Polynomial(n, terms)


@st.composite
def poly_pairs(draw, count: int = 2, nvars: int | None = None, **kw):
    n = draw(st.integers(1, 3)) if nvars is None else nvars
    return tuple(draw(polynomials(n, **kw)) for _ in range(count))


def to_sympy(f: Polynomial):
    """Expression in independent symbols z1.., w1.. (w = zbar)."""
    n = f.nvars
    zs = sympy.symbols(f"z1:{n + 1}")
    ws = sympy.symbols(f"w1:{n + 1}")
    expr = sympy.Integer(0)
    for key, c in f.items():
        coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator
        )
        mono = sympy.Integer(1)
        for v, e in zip(zs + ws, key):
            mono *= v**e
        expr += coeff * mono
    return sympy.expand(expr), zs, ws


def from_sympy(expr, n: int) -> Polynomial:
    zs = sympy.symbols(f"z1:{n + 1}")
    ws = sympy.symbols(f"w1:{n + 1}")
    poly = sympy.Poly(sympy.expand(expr), *(zs + ws))
    terms = []
    for mon, c in poly.terms():
        re, im = sympy.re(c), sympy.im(c)
        terms.append((mon, GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))))
    return Polynomial(n, terms)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
