"""Tridiagonal spectral theory of the perturbed Kohn Laplacian on the Rossi sphere.

On H_K(S^3) take f_i = zbar_1^(K-i) zbar_2^i and the chains

    V_i = span{Lbar^s f_i : s even},  W_i = span{Lbar^s f_i : s odd}.

box_b^t leaves each chain invariant and acts tridiagonally on it.  With
b_j the j-th chain element (s = 2j-2 on V, s = 2j-1 on W) the matrix in the
basis b_j is h * T where

    V:  d_j = (K-2j+2)(2j-1) + |t|^2 (2j-2)(K-2j+3)
        u_j = -t * 2j(2j-1)(K-2j+1)(K-2j+2)
    W:  d_j = 2j(K-2j+1) + |t|^2 (2j-1)(K-2j+2)
        u_j = -t * 2j(2j+1)(K-2j)(K-2j+1)

with subdiagonal -conj(t) and h = (1+|t|^2)/(1-|t|^2)^2.  At odd degree
K = 2k-1 both chains have k elements; the W entries and the V diagonal then
coincide with the commonly printed parameter-k formulas
(:func:`printed_entries`), whose V superdiagonal carries the factor
(2k-1-2j) where the operator produces (2k+1-2j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .crops import box_b_t, lbar_raw, rossi_scale
from .harmonic import sphere_inner_product
from .polyring import GaussianRational, Polynomial, reduce_mod_sphere

FAMILIES = ("V", "W")


class InvarianceViolation(AssertionError):
    pass


class FormulaDiscrepancy(AssertionError):
    def __init__(self, msg: str, j: int | None = None, entry: str | None = None):
        super().__init__(msg)
        self.j = j
        self.entry = entry


class StructuralError(ValueError):
    pass


def _abs2(t):
    if isinstance(t, GaussianRational):
        return t.abs2()
    if isinstance(t, complex):
        return abs(t) ** 2
    return t * t


def _conj(t):
    if isinstance(t, (GaussianRational, complex)):
        return t.conjugate()
    return t


def _check_t(t) -> None:
    if _abs2(t) >= 1:
        raise ValueError(f"|t| must be < 1, got t = {t}")


@dataclass(frozen=True)
class SubspaceSpec:
    """Chain ``family`` in H_k(S^3) generated by f_i = zbar_1^(k-i) zbar_2^i."""

    k: int
    family: str
    i: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("degree k must be >= 1")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be 'V' or 'W', got {self.family!r}")
        if not 0 <= self.i <= self.k:
            raise IndexError(f"i = {self.i} out of range 0..{self.k}")

    @property
    def dim(self) -> int:
        return self.k // 2 + 1 if self.family == "V" else (self.k + 1) // 2

    @property
    def powers(self) -> list[int]:
        """Exponents s of Lbar^s f_i spanning the chain."""
        start = 0 if self.family == "V" else 1
        return list(range(start, self.k + 1, 2))


def theorem_spec(k: int, family: str, i: int = 0) -> SubspaceSpec:
    """The chain whose matrix has size k: it lives in H_{2k-1}(S^3)."""
    return SubspaceSpec(2 * k - 1, family, i)


def subspace_basis(spec: SubspaceSpec) -> list[Polynomial]:
    """[Lbar^s f_i for s in spec.powers], reduced mod the sphere."""
    f = Polynomial.monomial((0, 0), (spec.k - spec.i, spec.i))
    out = []
    cur = f
    for s in range(spec.k + 1):
        if s in spec.powers:
            out.append(reduce_mod_sphere(cur))
        cur = lbar_raw(cur)
    return out


# -- entry formulas ----------------------------------------------------------


def degree_entries(degree: int, family: str, t):
    """(d, u, lower) at h = 1 for the chain of ``family`` in H_degree(S^3).

    Works with exact (GaussianRational / Fraction / int) or float t.
    """
    K = degree
    spec = SubspaceSpec(K, family)
    a2 = _abs2(t)
    m = spec.dim
    d, u = [], []
    for j in range(1, m + 1):
        if family == "V":
            d.append((K - 2 * j + 2) * (2 * j - 1) + a2 * ((2 * j - 2) * (K - 2 * j + 3)))
        else:
            d.append(2 * j * (K - 2 * j + 1) + a2 * ((2 * j - 1) * (K - 2 * j + 2)))
    for j in range(1, m):
        if family == "V":
            s = 2 * j * (2 * j - 1) * (K - 2 * j + 1) * (K - 2 * j + 2)
        else:
            s = 2 * j * (2 * j + 1) * (K - 2 * j) * (K - 2 * j + 1)
        u.append(-t * s)
    lower = [-_conj(t)] * (m - 1)
    return d, u, lower


def printed_entries(k: int, family: str, t):
    """(d, u, lower) exactly as the size-k formulas are usually printed, h = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a2 = _abs2(t)
    d, u = [], []
    for j in range(1, k + 1):
        if family == "V":
            d.append((2 * j - 1) * (2 * k + 1 - 2 * j) + a2 * (4 * (j - 1) * (k + 1 - j)))
        elif family == "W":
            d.append(4 * j * (k - j) + a2 * ((2 * j - 1) * (2 * k + 1 - 2 * j)))
        else:
            raise ValueError(f"family must be 'V' or 'W', got {family!r}")
    for j in range(1, k):
        if family == "V":
            u.append(-4 * t * (j * (2 * j - 1) * (k - j) * (2 * k - 1 - 2 * j)))
        else:
            u.append(-4 * t * (j * (2 * j + 1) * (k - j) * (2 * k - 1 - 2 * j)))
    lower = [-_conj(t)] * (k - 1)
    return d, u, lower


# -- numeric representation --------------------------------------------------


@dataclass
class TridiagonalRep:
    dim: int
    d: list[float]
    u: list[float]
    lower: list[float]
    t: float
    h: float = 1.0
    c: list[float] | None = None

    @property
    def symmetric(self) -> bool:
        return self.c is not None

    def dense(self):
        """Unsymmetrized matrix as a numpy array."""
        import numpy as np

        a = np.diag(np.asarray(self.d, dtype=float))
        for j in range(self.dim - 1):
            a[j, j + 1] = self.u[j]
            a[j + 1, j] = self.lower[j]
        return a


def build_tridiagonal(spec: SubspaceSpec, t: float, h: float = 1.0,
                      formulas: str = "derived") -> TridiagonalRep:
    """Numeric tridiagonal matrix of box_b^t on a chain, scaled by h.

    ``formulas="printed"`` uses :func:`printed_entries` and needs odd degree.
    """
    t = float(t)
    _check_t(t)
    if formulas == "derived":
        d, u, lower = degree_entries(spec.k, spec.family, t)
    elif formulas == "printed":
        if spec.k % 2 == 0:
            raise ValueError("printed formulas describe odd degree 2k-1 only")
        d, u, lower = printed_entries((spec.k + 1) // 2, spec.family, t)
    else:
        raise ValueError(f"unknown formulas {formulas!r}")
    return TridiagonalRep(
        dim=len(d),
        d=[h * float(x) for x in d],
        u=[h * float(x) for x in u],
        lower=[h * float(x) for x in lower],
        t=t,
        h=h,
    )


def symmetrize(rep: TridiagonalRep) -> TridiagonalRep:
    """Diagonal similarity to a real symmetric tridiagonal matrix.

    c_j = sqrt(u_j * lower_j), i.e. |t| sqrt(-u_j / t) at h = 1.
    """
    c = []
    for j, (up, lo) in enumerate(zip(rep.u, rep.lower), start=1):
        prod = up * lo
        if prod < 0:
            raise StructuralError(f"negative radicand {prod} at j={j}")
        c.append(math.sqrt(prod))
    return TridiagonalRep(rep.dim, list(rep.d), list(rep.u), list(rep.lower), rep.t, rep.h, c)


def sturm_count(d: Sequence[float], c: Sequence[float], x: float) -> int:
    """Number of eigenvalues < x of the symmetric tridiagonal (d, c).

    Counts negative pivots of the LDL^T factorization of T - x I.
    """
    if not len(d):
        return 0
    scale = max(1.0, max((abs(v) for v in d), default=0.0), max((abs(v) for v in c), default=0.0))
    pivmin = 1e-300 * scale * scale
    count = 0
    q = d[0] - x
    for j in range(len(d)):
        if j:
            q = (d[j] - x) - c[j - 1] * c[j - 1] / q
        if q == 0.0:
            q = pivmin
        if q < 0:
            count += 1
    return count


def gershgorin_interval(rep: TridiagonalRep) -> tuple[float, float]:
    """Union of the Gershgorin discs of the symmetric matrix, as an interval."""
    c = _require_sym(rep)
    lo, hi = math.inf, -math.inf
    for i, di in enumerate(rep.d):
        r = (c[i - 1] if i > 0 else 0.0) + (c[i] if i < rep.dim - 1 else 0.0)
        lo = min(lo, di - r)
        hi = max(hi, di + r)
    return lo, hi


def _require_sym(rep: TridiagonalRep) -> list[float]:
    if rep.c is None:
        raise StructuralError("representation is not symmetrized")
    return rep.c


def default_tol(rep: TridiagonalRep) -> float:
    _, hi = gershgorin_interval(rep)
    return 1e-10 * max(1.0, abs(hi))


def extreme_eigenvalues(rep: TridiagonalRep, tol: float | None = None) -> tuple[float, float]:
    """(lambda_min, lambda_max) by Sturm bisection inside the Gershgorin interval."""
    c = _require_sym(rep)
    if tol is None:
        tol = default_tol(rep)
    if tol <= 0:
        raise ValueError("tol must be positive")
    glo, ghi = gershgorin_interval(rep)
    n = rep.dim

    def bisect(target: int) -> float:
        # smallest x with count(< x) >= target, i.e. the target-th eigenvalue
        lo, hi = glo - tol, ghi + tol
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if sturm_count(rep.d, c, mid) >= target:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    return bisect(1), bisect(n)


def all_eigenvalues(rep: TridiagonalRep, tol: float | None = None) -> list[float]:
    """Every eigenvalue, ascending, by bisection on each index."""
    c = _require_sym(rep)
    if tol is None:
        tol = default_tol(rep)
    glo, ghi = gershgorin_interval(rep)
    out = []
    for target in range(1, rep.dim + 1):
        lo, hi = glo - tol, ghi + tol
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if sturm_count(rep.d, c, mid) >= target:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return out


def certificate(rep: TridiagonalRep) -> float:
    """Middle diagonal entry d_ceil(dim/2): a Rayleigh-quotient lower bound for lambda_max."""
    return rep.d[(rep.dim + 1) // 2 - 1]


@dataclass
class SpectralSummary:
    k: int
    t: float
    family: str
    lambda_max: float
    lambda_min: float
    gershgorin_lo: float
    gershgorin_hi: float
    certificate_mid_diag: float
    degree: int = 0

    @property
    def ratio(self) -> float:
        return self.lambda_max / self.k**2

    def row(self) -> dict:
        return {
            "k": self.k,
            "family": self.family,
            "t": self.t,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "ratio": self.ratio,
            "gersh_lo": self.gershgorin_lo,
            "gersh_hi": self.gershgorin_hi,
            "certificate": self.certificate_mid_diag,
        }


def summarize(spec: SubspaceSpec, t: float, h: float = 1.0, k_label: int | None = None,
              tol: float | None = None, formulas: str = "derived") -> SpectralSummary:
    rep = symmetrize(build_tridiagonal(spec, t, h, formulas=formulas))
    lo, hi = gershgorin_interval(rep)
    lmin, lmax = extreme_eigenvalues(rep, tol)
    return SpectralSummary(
        k=spec.k if k_label is None else k_label,
        t=float(t),
        family=spec.family,
        lambda_max=lmax,
        lambda_min=lmin,
        gershgorin_lo=lo,
        gershgorin_hi=hi,
        certificate_mid_diag=certificate(rep),
        degree=spec.k,
    )


def lambda_max_series(k_range: Sequence[int], t: float, h: float = 1.0,
                      tol: float | None = None) -> list[SpectralSummary]:
    """lambda_k^max for each size parameter k (chains in H_{2k-1}(S^3)).

    The maximum is taken over both families; the certificate is the W-chain
    middle diagonal entry, which equals k^2 + |t|^2 (k-1)(k+1) for even k at
    h = 1.
    """
    _check_t(t)
    out = []
    for k in k_range:
        v = summarize(theorem_spec(k, "V"), t, h, k_label=k, tol=tol)
        w = summarize(theorem_spec(k, "W"), t, h, k_label=k, tol=tol)
        top = v if v.lambda_max >= w.lambda_max else w
        s = SpectralSummary(
            k=k,
            t=float(t),
            family=top.family,
            lambda_max=top.lambda_max,
            lambda_min=min(v.lambda_min, w.lambda_min),
            gershgorin_lo=min(v.gershgorin_lo, w.gershgorin_lo),
            gershgorin_hi=max(v.gershgorin_hi, w.gershgorin_hi),
            certificate_mid_diag=w.certificate_mid_diag,
            degree=2 * k - 1,
        )
        slack = 1e-8 * max(1.0, abs(s.gershgorin_hi))
        assert s.certificate_mid_diag <= s.lambda_max + slack
        assert s.lambda_max <= s.gershgorin_hi + slack
        assert s.gershgorin_lo <= s.lambda_min + slack
        out.append(s)
    return out


# -- exact symbolic oracle ---------------------------------------------------


def oracle_matrix(spec: SubspaceSpec, t) -> list[list[GaussianRational]]:
    """Exact matrix of box_b^t on the chain, built by applying the operator.

    Column j holds the coordinates of box_b^t(b_j); coordinates come from
    inner products against the orthogonal chain.  Raises
    :class:`InvarianceViolation` if the image leaves the chain or the matrix
    is not tridiagonal.
    """
    t = GaussianRational.coerce(t)
    basis = subspace_basis(spec)
    norms = [sphere_inner_product(b, b) for b in basis]
    m = len(basis)
    mat = [[GaussianRational(0)] * m for _ in range(m)]
    for j, b in enumerate(basis):
        img = box_b_t(b, t)
        resid = img
        for l, bl in enumerate(basis):
            coef = sphere_inner_product(img, bl) / norms[l]
            mat[l][j] = coef
            if coef:
                resid = resid - bl.scale(coef)
        if not reduce_mod_sphere(resid).is_zero():
            raise InvarianceViolation(f"box_b^t(b_{j + 1}) leaves the chain {spec}")
    for l in range(m):
        for j in range(m):
            if abs(l - j) > 1 and mat[l][j]:
                raise InvarianceViolation(f"entry ({l + 1},{j + 1}) off the tridiagonal band")
    return mat


def _exact_t(t) -> GaussianRational:
    if isinstance(t, float):
        raise TypeError("the exact oracle needs a rational t such as Fraction(1, 4)")
    return GaussianRational.coerce(t)


def calibrate_h(spec: SubspaceSpec, t, formulas: str = "derived",
                oracle: list[list[GaussianRational]] | None = None) -> GaussianRational:
    """Scale h with oracle = h * formula matrix, checked entry by entry.

    Raises :class:`FormulaDiscrepancy` naming the first offending entry.
    """
    t = _exact_t(t)
    mat = oracle if oracle is not None else oracle_matrix(spec, t)
    if formulas == "derived":
        d, u, lower = degree_entries(spec.k, spec.family, t)
    elif formulas == "printed":
        if spec.k % 2 == 0:
            raise ValueError("printed formulas describe odd degree 2k-1 only")
        d, u, lower = printed_entries((spec.k + 1) // 2, spec.family, t)
    else:
        raise ValueError(f"unknown formulas {formulas!r}")
    if len(d) != len(mat):
        raise FormulaDiscrepancy(f"size {len(d)} vs oracle size {len(mat)}")
    h = mat[0][0] / GaussianRational.coerce(d[0])
    checks = [("d", j, mat[j][j], d[j]) for j in range(len(d))]
    checks += [("u", j, mat[j][j + 1], u[j]) for j in range(len(u))]
    checks += [("lower", j, mat[j + 1][j], lower[j]) for j in range(len(lower))]
    for name, j, got, formula in checks:
        if got != h * GaussianRational.coerce(formula):
            raise FormulaDiscrepancy(
                f"{name}_{j + 1}: oracle {got.to_text()} != h * {GaussianRational.coerce(formula).to_text()}"
                f" with h = {h.to_text()}",
                j=j + 1,
                entry=name,
            )
    return h


# -- exact characteristic polynomials ---------------------------------------


def charpoly_tridiagonal(d: Sequence, offprod: Sequence) -> list:
    """Coefficients (constant first) of det(x I - T) for tridiagonal T,
    given the diagonal and the products T[j,j+1] * T[j+1,j]."""
    prev2 = [Fraction(1)]
    prev = [-Fraction(d[0]), Fraction(1)] if len(d) else [Fraction(1)]
    for j in range(1, len(d)):
        cur = [Fraction(0)] * (j + 2)
        for i, a in enumerate(prev):
            cur[i + 1] += a
            cur[i] -= Fraction(d[j]) * a
        for i, a in enumerate(prev2):
            cur[i] -= Fraction(offprod[j - 1]) * a
        prev2, prev = prev, cur
    return prev


def charpoly_dense(mat: Sequence[Sequence]) -> list:
    """det(x I - A) for an exact square matrix by Faddeev-LeVerrier."""
    n = len(mat)
    A = [[Fraction(v) for v in row] for row in mat]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        AMk = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AMk[i][i] for i in range(n)) / k
    return coeffs
