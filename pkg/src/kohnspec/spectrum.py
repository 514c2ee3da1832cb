"""Closed-form Kohn Laplacian eigenvalues and the eigenvalue counting function."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

from .harmonic import dim_hpq


def eigenvalue_formula(n: int, p: int, q: int) -> int:
    """Eigenvalue 2q(p+n-1) of box_b on H_{p,q}(S^{2n-1})."""
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0")
    return 2 * q * (p + n - 1)


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError("the counting function needs n >= 2 (n = 1 has only the zero eigenvalue)")


def positive_eigenspaces(n: int, m: int):
    """Yield (p, q, eigenvalue) for every q >= 1 with 2q(p+n-1) <= m."""
    _check_n(n)
    if m < 2:
        return
    for q in range(1, m // (2 * (n - 1)) + 1):
        for p in range(0, m // (2 * q) - (n - 1) + 1):
            yield p, q, 2 * q * (p + n - 1)


def counting_function(n: int, m: int) -> int:
    """N(m): positive eigenvalues <= m counted with multiplicity.

    The kernel (q = 0) is infinite dimensional and is not counted.
    """
    return sum(dim_hpq(n, p, q) for p, q, _ in positive_eigenspaces(n, m))


def multiplicity(n: int, m: int) -> int:
    """Total dimension of the eigenspace for eigenvalue m (m >= 2)."""
    _check_n(n)
    if m % 2:
        return 0
    if m < 2:
        raise ValueError("multiplicity is defined for positive even m")
    total = 0
    half = m // 2
    for q in range(1, half + 1):
        if half % q == 0:
            p = half // q - (n - 1)
            if p >= 0:
                total += dim_hpq(n, p, q)
    return total


def divisor_sigma(m: int) -> int:
    """Sum of the positive divisors of m."""
    if m < 1:
        raise ValueError("divisor_sigma needs m >= 1")
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            total += d
            if d * d != m:
                total += m // d
        d += 1
    return total


def divisor_sigma_partial_sum(m: int) -> int:
    """sum_{x <= m} sigma(x) = sum_{d <= m} d * floor(m / d)."""
    return sum(d * (m // d) for d in range(1, m + 1))


def counting_table(n: int, m_max: int) -> list[int]:
    """N(0..m_max) from one enumeration of the eigenspaces."""
    if m_max < 0:
        return []
    jumps = [0] * (m_max + 1)
    for p, q, lam in positive_eigenspaces(n, m_max):
        jumps[lam] += dim_hpq(n, p, q)
    out, acc = [], 0
    for j in jumps:
        acc += j
        out.append(acc)
    return out


def lower_bound_witness(n: int, m: int) -> tuple[int, int]:
    """(p_hat, binom(n+p_hat-2, n-1)) where 2(p_hat+n-1) = m, for even m > 2(n-1)."""
    if m % 2 or m <= 2 * (n - 1):
        raise ValueError("need even m > 2(n-1)")
    p_hat = m // 2 - (n - 1)
    return p_hat, comb(n + p_hat - 2, n - 1)


@dataclass
class CountingTable:
    n: int
    max_m: int
    values: dict[int, int] = field(default_factory=dict)
    ratios: dict[int, Fraction] = field(default_factory=dict)

    @property
    def ratio_min(self) -> Fraction | None:
        return min(self.ratios.values(), default=None)

    @property
    def ratio_max(self) -> Fraction | None:
        return max(self.ratios.values(), default=None)

    @property
    def limsup_estimate(self) -> Fraction | None:
        """max N(m)/m^n over the upper half of the sampled range."""
        if not self.ratios:
            return None
        ms = sorted(self.ratios)
        tail = ms[len(ms) // 2:]
        return max(self.ratios[m] for m in tail)

    def rows(self) -> list[dict]:
        return [
            {"m": m, "N": self.values[m], "ratio": decimal_str(self.ratios[m])}
            for m in sorted(self.values)
        ]


def decimal_str(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def growth_report(n: int, m_max: int, step: int = 2) -> CountingTable:
    """N(m) and N(m)/m^n at m = step, 2*step, ... <= m_max."""
    _check_n(n)
    if step < 1:
        raise ValueError("step must be positive")
    table = CountingTable(n, m_max)
    if m_max < step:
        return table
    full = counting_table(n, m_max)
    for m in range(step, m_max + 1, step):
        table.values[m] = full[m]
        table.ratios[m] = Fraction(full[m], m**n)
    return table
