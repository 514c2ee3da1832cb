"""Exact sparse polynomials in z_1..z_n and their conjugates.

The conjugate variables are treated as independent commuting indeterminates
(Wirtinger calculus).  In text form they are written ``w1..wn``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Iterator, Mapping


class DimensionMismatch(ValueError):
    pass


class UndefinedBidegree(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


_NUM = r"\d+(?:\.\d+)?(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"(?P<re>[+-]?{_NUM})?(?:(?P<im>(?(re)[+-]|[+-]?)(?:{_NUM})?)\*?i)?"
)


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x, 0)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``a/b``, ``c/d*i`` or ``a/b+c/d*i`` (parentheses optional)."""
        s = text.strip().replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = _GAUSS_RE.fullmatch(s)
        if not s or not m:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_part, im_part = m.group("re"), m.group("im")
        if im_part is None:
            return cls(Fraction(re_part), 0)
        im_val = Fraction(im_part + "1") if im_part in ("", "+", "-") else Fraction(im_part)
        return cls(Fraction(re_part) if re_part else 0, im_val)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re, 0)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.abs2()
        if not den:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|x|^2, which stays in Q."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def to_text(self) -> str:
        def q(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        if not self.im:
            return f"({q(self.re)})"
        if not self.re:
            return f"({q(self.im)}*i)"
        sign = "+" if self.im > 0 else "-"
        return f"({q(self.re)}{sign}{q(abs(self.im))}*i)"

    __str__ = to_text


@dataclass(frozen=True, order=False)
class Monomial:
    """z^alpha * zbar^beta."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise DimensionMismatch("alpha and beta must have the same length")
        if any(a < 0 for a in self.alpha + self.beta):
            raise ValueError("exponents must be non-negative")

    @property
    def nvars(self) -> int:
        return len(self.alpha)

    @property
    def bidegree(self) -> tuple[int, int]:
        return sum(self.alpha), sum(self.beta)

    @property
    def key(self) -> tuple[int, ...]:
        return self.alpha + self.beta

    @classmethod
    def from_key(cls, key: tuple[int, ...]) -> "Monomial":
        n = len(key) // 2
        return cls(tuple(key[:n]), tuple(key[n:]))

    def to_text(self) -> str:
        return _monomial_text(self.key)


def order_key(key: tuple[int, ...]):
    """Sort key for graded-lex order; ascending sort of this key lists
    monomials from largest to smallest."""
    return (-sum(key), tuple(-e for e in key))


def _monomial_text(key: tuple[int, ...]) -> str:
    n = len(key) // 2
    parts = []
    for i, e in enumerate(key[:n]):
        if e:
            parts.append(f"z{i + 1}^{e}")
    for i, e in enumerate(key[n:]):
        if e:
            parts.append(f"w{i + 1}^{e}")
    return "*".join(parts)


def _add_into(acc: dict, key, coeff) -> None:
    c = acc.get(key)
    if c is None:
        acc[key] = coeff
    else:
        s = c + coeff
        if s:
            acc[key] = s
        else:
            del acc[key]


class Polynomial:
    """Immutable sparse polynomial over Q(i) in z_1..z_n, zbar_1..zbar_n.

    Terms are stored as ``{exponent tuple of length 2n: GaussianRational}``
    with no zero coefficients.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        self.nvars = nvars
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, coeff in items:
            if isinstance(key, Monomial):
                key = key.key
            key = tuple(key)
            if len(key) != 2 * nvars:
                raise DimensionMismatch(f"exponent tuple {key} does not fit nvars={nvars}")
            c = GaussianRational.coerce(coeff)
            if c:
                _add_into(acc, key, c)
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # terms already canonical (no zeros, tuple keys)
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * (2 * nvars): c})

    @classmethod
    def monomial(cls, alpha: Iterable[int], beta: Iterable[int], coeff=1) -> "Polynomial":
        m = Monomial(tuple(alpha), tuple(beta))
        return cls(m.nvars, {m.key: coeff})

    @classmethod
    def z(cls, i: int, nvars: int) -> "Polynomial":
        _check_index(i, nvars)
        key = [0] * (2 * nvars)
        key[i - 1] = 1
        return cls._raw(nvars, {tuple(key): GaussianRational(1)})

    @classmethod
    def zbar(cls, i: int, nvars: int) -> "Polynomial":
        _check_index(i, nvars)
        key = [0] * (2 * nvars)
        key[nvars + i - 1] = 1
        return cls._raw(nvars, {tuple(key): GaussianRational(1)})

    # mapping-like access

    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self) -> Iterator:
        """(key, coeff) pairs in monomial order."""
        for key in sorted(self._terms, key=order_key):
            yield key, self._terms[key]

    def coefficient(self, key) -> GaussianRational:
        if isinstance(key, Monomial):
            key = key.key
        return self._terms.get(tuple(key), GaussianRational(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch(f"nvars {self.nvars} != {other.nvars}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(acc, k, c)
        return Polynomial._raw(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(acc, k, -c)
        return Polynomial._raw(self.nvars, acc)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                _add_into(acc, tuple(a + b for a, b in zip(k1, k2)), c1 * c2)
        return Polynomial._raw(self.nvars, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = GaussianRational.coerce(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {k: v * c for k, v in self._terms.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.nvars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> "Polynomial":
        """Complex conjugate: swaps z and zbar exponents and conjugates coefficients."""
        n = self.nvars
        return Polynomial._raw(
            n, {k[n:] + k[:n]: c.conjugate() for k, c in self._terms.items()}
        )

    # calculus

    def _diff_slot(self, slot: int) -> "Polynomial":
        acc: dict = {}
        for k, c in self._terms.items():
            e = k[slot]
            if e:
                nk = k[:slot] + (e - 1,) + k[slot + 1:]
                _add_into(acc, nk, c * e)
        return Polynomial._raw(self.nvars, acc)

    def dz(self, i: int) -> "Polynomial":
        """Partial derivative in z_i (1-based)."""
        _check_index(i, self.nvars)
        return self._diff_slot(i - 1)

    def dzbar(self, i: int) -> "Polynomial":
        """Partial derivative in zbar_i (1-based)."""
        _check_index(i, self.nvars)
        return self._diff_slot(self.nvars + i - 1)

    def mul_var(self, slot: int) -> "Polynomial":
        """Multiply by the variable in exponent slot ``slot`` (0-based over 2n)."""
        return Polynomial._raw(
            self.nvars,
            {k[:slot] + (k[slot] + 1,) + k[slot + 1:]: c for k, c in self._terms.items()},
        )

    def mul_z(self, i: int) -> "Polynomial":
        return self.mul_var(i - 1)

    def mul_zbar(self, i: int) -> "Polynomial":
        return self.mul_var(self.nvars + i - 1)

    # degree data

    def bidegree(self) -> tuple[int, int] | None:
        """(p, q) if homogeneous, ``None`` if inhomogeneous."""
        if not self._terms:
            raise UndefinedBidegree("the zero polynomial has no bidegree")
        n = self.nvars
        degs = {(sum(k[:n]), sum(k[n:])) for k in self._terms}
        return degs.pop() if len(degs) == 1 else None

    def total_degree(self) -> int:
        return max((sum(k) for k in self._terms), default=-1)

    def leading_key(self) -> tuple[int, ...]:
        return min(self._terms, key=order_key)

    # text

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, c in self.items():
            mono = _monomial_text(k)
            out.append(f"{c.to_text()}*{mono}" if mono else c.to_text())
        return " + ".join(out)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_text()!r})"

    __str__ = to_text


def _check_index(i: int, nvars: int) -> None:
    if not 1 <= i <= nvars:
        raise IndexError(f"variable index {i} out of range 1..{nvars}")


_TERM_RE = re.compile(r"\(([^()]*)\)((?:\*[zw]\d+\^\d+)*)")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Inverse of :meth:`Polynomial.to_text`."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero(nvars)
    acc: dict = {}
    for raw in text.split(" + "):
        m = _TERM_RE.fullmatch(raw.strip())
        if not m:
            raise ValueError(f"cannot parse term {raw!r}")
        coeff = GaussianRational.parse(m.group(1))
        key = [0] * (2 * nvars)
        for var in filter(None, m.group(2).split("*")):
            name, exp = var.split("^")
            idx = int(name[1:])
            _check_index(idx, nvars)
            slot = idx - 1 if name[0] == "z" else nvars + idx - 1
            key[slot] += int(exp)
        _add_into(acc, tuple(key), coeff)
    return Polynomial._raw(nvars, acc)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.nvars != b.nvars:
        raise DimensionMismatch(f"nvars {a.nvars} != {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def diff(f: Polynomial, var: str) -> Polynomial:
    """Derivative by variable name: ``"z2"`` or ``"w2"`` (= zbar_2)."""
    m = re.fullmatch(r"([zw])(\d+)", var)
    if not m:
        raise ValueError(f"bad variable name {var!r}")
    i = int(m.group(2))
    return f.dz(i) if m.group(1) == "z" else f.dzbar(i)


def laplacian(f: Polynomial) -> Polynomial:
    """4 * sum_i d^2 f / dz_i dzbar_i."""
    n = f.nvars
    acc: dict = {}
    for k, c in f._terms.items():
        for i in range(n):
            a, b = k[i], k[n + i]
            if a and b:
                nk = list(k)
                nk[i] -= 1
                nk[n + i] -= 1
                _add_into(acc, tuple(nk), c * (4 * a * b))
    return Polynomial._raw(n, acc)


def reduce_mod_sphere(f: Polynomial) -> Polynomial:
    """Normal form modulo |z_1|^2 + ... + |z_n|^2 - 1.

    Rewrites z1*zbar1 -> 1 - sum_{i>=2} zi*zbar_i until no term is divisible
    by z1*zbar1.  Each pass strips one factor from every term of maximal
    z1*zbar1 multiplicity, so the maximum strictly drops.
    """
    n = f.nvars
    terms = dict(f._terms)

    def mult(k):
        return min(k[0], k[n])

    level = max((mult(k) for k in terms), default=0)
    while level > 0:
        top = [k for k in terms if mult(k) == level]
        for k in top:
            c = terms.pop(k)
            base = list(k)
            base[0] -= 1
            base[n] -= 1
            _add_into(terms, tuple(base), c)
            for i in range(1, n):
                nk = list(base)
                nk[i] += 1
                nk[n + i] += 1
                _add_into(terms, tuple(nk), -c)
        new_level = max((mult(k) for k in terms), default=0)
        assert new_level < level, "sphere rewrite failed to make progress"
        level = new_level
    return Polynomial._raw(n, terms)


def bidegree(f: Polynomial) -> tuple[int, int] | str:
    """(p, q) or the string ``"inhomogeneous"``."""
    bd = f.bidegree()
    return "inhomogeneous" if bd is None else bd


def sphere_norm(n: int) -> Polynomial:
    """sum_i z_i zbar_i."""
    acc = {}
    for i in range(n):
        k = [0] * (2 * n)
        k[i] = k[n + i] = 1
        acc[tuple(k)] = GaussianRational(1)
    return Polynomial._raw(n, acc)


def count_monomials(n: int, d: int) -> int:
    """Number of monomials of degree d in n variables."""
    return comb(n + d - 1, d) if d >= 0 else 0
