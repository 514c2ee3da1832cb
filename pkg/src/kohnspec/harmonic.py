"""Bigraded spherical harmonics H_{p,q}(S^{2n-1}) and L^2 inner products."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterator

from . import exact
from .polyring import (
    DimensionMismatch,
    GaussianRational,
    Monomial,
    Polynomial,
    laplacian,
    order_key,
)


def _check_nonneg(**kw) -> None:
    for name, v in kw.items():
        if v < 0:
            raise ValueError(f"{name} must be non-negative, got {v}")


def dim_hpq(n: int, p: int, q: int) -> int:
    """dim H_{p,q}(S^{2n-1}).

    Product formula for p, q >= 1; the full (anti)holomorphic monomial count
    when p or q is zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_nonneg(p=p, q=q)
    if q == 0:
        return comb(n + p - 1, p)
    if p == 0:
        return comb(n + q - 1, q)
    val = Fraction((n - 1) * (n + p + q - 1), p * q) * comb(n + p - 2, p - 1) * comb(n + q - 2, q - 1)
    assert val.denominator == 1
    return int(val)


def dim_hpq_difference(n: int, p: int, q: int) -> int:
    """The binomial-difference form of the same dimension (p, q >= 1)."""
    if p < 1 or q < 1:
        raise ValueError("difference form is stated for p, q >= 1")
    return comb(n + p - 1, p) * comb(n + q - 1, q) - comb(n + p - 2, p - 1) * comb(n + q - 2, q - 1)


def _exponents(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All n-tuples of non-negative ints summing to d, lex-descending."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _exponents(n - 1, d - first):
            yield (first,) + rest


def monomial_basis(n: int, p: int, q: int) -> list[Monomial]:
    """All monomials of bidegree (p, q), largest first in graded-lex order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if p < 0 or q < 0:
        return []
    monos = [Monomial(a, b) for a in _exponents(n, p) for b in _exponents(n, q)]
    monos.sort(key=lambda m: order_key(m.key))
    return monos


@dataclass(frozen=True)
class HarmonicBasis:
    n: int
    p: int
    q: int
    elements: tuple[Polynomial, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _laplacian_blocks(n: int, p: int, q: int):
    """Group bidegree-(p,q) monomial keys by alpha - beta, which the Laplacian preserves."""
    blocks = defaultdict(list)
    for m in monomial_basis(n, p, q):
        delta = tuple(a - b for a, b in zip(m.alpha, m.beta))
        blocks[delta].append(m.key)
    return blocks


def _kernel_of_block(n: int, keys: list[tuple[int, ...]]) -> list[Polynomial]:
    # Column j is the Laplacian of monomial keys[j]; rows are the image monomials.
    row_index: dict = {}
    rows: list[dict] = []
    for j, key in enumerate(keys):
        img = laplacian(Polynomial._raw(n, {key: GaussianRational(1)}))
        for k, c in img._terms.items():
            if k not in row_index:
                row_index[k] = len(rows)
                rows.append({})
            rows[row_index[k]][j] = c.re
    out = []
    for vec in exact.nullspace(rows, len(keys)):
        out.append(Polynomial._raw(n, {keys[j]: GaussianRational(v) for j, v in vec.items()}))
    return out


def harmonic_basis(n: int, p: int, q: int) -> HarmonicBasis:
    """Exact basis of ker(Laplacian) on the bidegree-(p,q) monomial span.

    The Laplacian maps z^a zbar^b to a combination of monomials with the same
    a - b, so the kernel is computed block by block.  Elements are ordered by
    their leading monomial.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_nonneg(p=p, q=q)
    elements: list[Polynomial] = []
    for keys in _laplacian_blocks(n, p, q).values():
        elements.extend(_kernel_of_block(n, keys))
    elements.sort(key=lambda f: order_key(f.leading_key()))
    return HarmonicBasis(n, p, q, tuple(elements))


def laplacian_nullity(n: int, degree: int) -> int:
    """Nullity of the Laplacian on all monomials of total degree ``degree``.

    Built as one matrix over the full span (no grading used), for
    cross-checking the bigraded dimensions.
    """
    cols = list(_exponents(2 * n, degree))
    row_index: dict = {}
    rows: list[dict] = []
    for j, key in enumerate(cols):
        img = laplacian(Polynomial._raw(n, {key: GaussianRational(1)}))
        for k, c in img._terms.items():
            if k not in row_index:
                row_index[k] = len(rows)
                rows.append({})
            rows[row_index[k]][j] = c.re
    return len(cols) - exact.rank(rows)


@dataclass(frozen=True)
class BigradedSignature:
    """Per-variable degrees: pvec[k] for z_k, qvec[k] for zbar_k."""

    pvec: tuple[int, ...]
    qvec: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pvec", tuple(self.pvec))
        object.__setattr__(self, "qvec", tuple(self.qvec))
        if len(self.pvec) != len(self.qvec):
            raise DimensionMismatch("pvec and qvec must have the same length")
        if any(v < 0 for v in self.pvec + self.qvec):
            raise ValueError("degrees must be non-negative")

    @property
    def n(self) -> int:
        return len(self.pvec)

    def is_admissible(self) -> bool:
        """True when p_k * q_k == 0 for every k."""
        return all(a * b == 0 for a, b in zip(self.pvec, self.qvec))


def hstar_element(sig: BigradedSignature) -> Polynomial | None:
    """The spanning monomial of H*_{pvec,qvec}, or ``None`` for the zero space.

    With every per-variable degree fixed the only candidate is the monomial
    z^pvec zbar^qvec, and it is harmonic exactly when no variable appears
    together with its conjugate.
    """
    if not sig.is_admissible():
        return None
    return Polynomial.monomial(sig.pvec, sig.qvec)


def monomial_integral(key: tuple[int, ...]) -> Fraction:
    """Integral of z^a zbar^b over S^{2n-1} for the unit-mass surface measure."""
    n = len(key) // 2
    a, b = key[:n], key[n:]
    if a != b:
        return Fraction(0)
    return Fraction(factorial(n - 1) * prod(factorial(e) for e in a), factorial(n - 1 + sum(a)))


def _by_difference(f: Polynomial) -> dict:
    n = f.nvars
    groups: dict = defaultdict(list)
    for k, c in f._terms.items():
        groups[tuple(a - b for a, b in zip(k[:n], k[n:]))].append((k, c))
    return groups


def sphere_inner_product(f: Polynomial, g: Polynomial) -> GaussianRational:
    """<f, g> = integral of f * conj(g) over the sphere (total mass 1).

    f-term z^a zbar^b against g-term z^c zbar^d integrates to zero unless
    a - b == c - d, so only those pairs are visited.
    """
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"nvars {f.nvars} != {g.nvars}")
    n = f.nvars
    gg = _by_difference(g)
    re = Fraction(0)
    im = Fraction(0)
    for delta, fterms in _by_difference(f).items():
        partners = gg.get(delta)
        if not partners:
            continue
        for kf, cf in fterms:
            for kg, cg in partners:
                # f * conj(g) term: z^(a+d) zbar^(b+c)
                alpha = tuple(x + y for x, y in zip(kf[:n], kg[n:]))
                w = monomial_integral(alpha + alpha)
                c = cf * cg.conjugate()
                re += c.re * w
                im += c.im * w
    return GaussianRational(re, im)


def sphere_norm2(f: Polynomial) -> Fraction:
    return sphere_inner_product(f, f).re


def oneform_inner_product(omega, eta) -> GaussianRational:
    """<omega, eta> with <dz_i, dz_j> = <dzbar_i, dzbar_j> = 2 delta_ij and
    no dz-dzbar cross terms."""
    if omega.nvars != eta.nvars:
        raise DimensionMismatch(f"nvars {omega.nvars} != {eta.nvars}")
    total = GaussianRational(0)
    for a, b in zip(omega.A, eta.A):
        total = total + sphere_inner_product(a, b)
    for a, b in zip(omega.B, eta.B):
        total = total + sphere_inner_product(a, b)
    return total * 2
