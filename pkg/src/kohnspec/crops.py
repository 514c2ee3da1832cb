"""CR differential operators acting on polynomial functions on the sphere.

Every operator here is tangential, so it is well defined on classes modulo
sum |z_i|^2 - 1; outputs are returned in sphere normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact
from .harmonic import BigradedSignature
from .polyring import DimensionMismatch, GaussianRational, Polynomial, reduce_mod_sphere


class OperatorUndefined(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class OneForm:
    """sum_k A_k dz_k + B_k dzbar_k with polynomial coefficients."""

    nvars: int
    A: tuple[Polynomial, ...]
    B: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        if len(self.A) != self.nvars or len(self.B) != self.nvars:
            raise DimensionMismatch("one-form needs n A- and n B-components")

    @classmethod
    def zero(cls, n: int) -> "OneForm":
        z = Polynomial.zero(n)
        return cls(n, (z,) * n, (z,) * n)

    @classmethod
    def dzbar(cls, i: int, n: int, coeff: Polynomial | None = None) -> "OneForm":
        """coeff * dzbar_i (1-based)."""
        c = Polynomial.constant(1, n) if coeff is None else coeff
        B = [Polynomial.zero(n)] * n
        B[i - 1] = c
        return cls(n, (Polynomial.zero(n),) * n, B)

    @classmethod
    def dz(cls, i: int, n: int, coeff: Polynomial | None = None) -> "OneForm":
        c = Polynomial.constant(1, n) if coeff is None else coeff
        A = [Polynomial.zero(n)] * n
        A[i - 1] = c
        return cls(n, A, (Polynomial.zero(n),) * n)

    def __add__(self, other: "OneForm") -> "OneForm":
        if self.nvars != other.nvars:
            raise DimensionMismatch("nvars differ")
        return OneForm(
            self.nvars,
            tuple(a + b for a, b in zip(self.A, other.A)),
            tuple(a + b for a, b in zip(self.B, other.B)),
        )

    def scale(self, c) -> "OneForm":
        return OneForm(self.nvars, tuple(a * c for a in self.A), tuple(b * c for b in self.B))

    def reduced(self) -> "OneForm":
        return OneForm(
            self.nvars,
            tuple(reduce_mod_sphere(a) for a in self.A),
            tuple(reduce_mod_sphere(b) for b in self.B),
        )

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.A) and all(b.is_zero() for b in self.B)


def _euler_z(f: Polynomial) -> Polynomial:
    n = f.nvars
    return Polynomial._raw(
        n, {k: c * sum(k[:n]) for k, c in f._terms.items() if sum(k[:n])}
    )


def _euler_zbar(f: Polynomial) -> Polynomial:
    n = f.nvars
    return Polynomial._raw(
        n, {k: c * sum(k[n:]) for k, c in f._terms.items() if sum(k[n:])}
    )


def euler(f: Polynomial, which: str) -> Polynomial:
    """sum_k z_k df/dz_k (``"holomorphic"``) or sum_k zbar_k df/dzbar_k
    (``"antiholomorphic"``), in the free polynomial ring."""
    if which == "holomorphic":
        return _euler_z(f)
    if which == "antiholomorphic":
        return _euler_zbar(f)
    raise ValueError(f"which must be 'holomorphic' or 'antiholomorphic', got {which!r}")


def dbar_b(f: Polynomial) -> OneForm:
    """Tangential Cauchy-Riemann operator on a function.

    B_i = df/dzbar_i - z_i * sum_a zbar_a df/dzbar_a, A = 0.
    """
    n = f.nvars
    radial = _euler_zbar(f)
    B = tuple(reduce_mod_sphere(f.dzbar(i) - radial.mul_z(i)) for i in range(1, n + 1))
    return OneForm(n, (Polynomial.zero(n),) * n, B)


def tangential_part(omega: OneForm) -> OneForm:
    """Drop the component of the dzbar part along sum_i z_i dzbar_i.

    B_i -> B_i - z_i * sum_a zbar_a B_a; A is left untouched.
    """
    n = omega.nvars
    normal = Polynomial.zero(n)
    for a, b in enumerate(omega.B, start=1):
        normal = normal + b.mul_zbar(a)
    B = tuple(reduce_mod_sphere(b - normal.mul_z(i)) for i, b in enumerate(omega.B, start=1))
    return OneForm(n, omega.A, B)


def dbar_b_star_formula(omega: OneForm) -> Polynomial:
    """-2 sum_i (dB_i/dz_i - sum_a d/dz_a (z_a zbar_i B_i)), read off B only.

    This equals the L^2 adjoint of dbar_b only on tangential forms
    (sum_i zbar_i B_i = 0 on the sphere); see :func:`dbar_b_star`.
    """
    n = omega.nvars
    acc = Polynomial.zero(n)
    for i, b in enumerate(omega.B, start=1):
        if b.is_zero():
            continue
        g = b.mul_zbar(i)
        # sum_a d/dz_a (z_a g) = (E_z + n) g
        acc = acc + b.dz(i) - _euler_z(g) - g.scale(n)
    return reduce_mod_sphere(acc.scale(-2))


def dbar_b_star(omega: OneForm) -> Polynomial:
    """L^2 adjoint of :func:`dbar_b` on (0,1)-forms.

    The coordinate formula is applied to the tangential part of the form;
    dz components are ignored.  On forms in the range of dbar_b the
    projection is the identity and this is the bare formula.
    """
    return dbar_b_star_formula(tangential_part(omega))


def box_b(f: Polynomial) -> Polynomial:
    """Kohn Laplacian on functions: dbar_b^* dbar_b."""
    return dbar_b_star(dbar_b(f))


# -- sum-of-squares operator -------------------------------------------------


def _m1k(f: Polynomial, k: int) -> Polynomial:
    # M_1k = zbar_1 d/dz_k - zbar_k d/dz_1
    return f.dz(k).mul_zbar(1) - f.dz(1).mul_zbar(k)


def _m1k_bar(f: Polynomial, k: int) -> Polynomial:
    # conj(M_1k) = z_1 d/dzbar_k - z_k d/dzbar_1
    return f.dzbar(k).mul_z(1) - f.dzbar(1).mul_z(k)


def m_b(f: Polynomial) -> Polynomial:
    """-(sum_{k>=2} M_1k conj(M_1k)) f, reduced mod the sphere."""
    n = f.nvars
    if n < 2:
        raise OperatorUndefined("M_b needs at least two complex variables")
    acc = Polynomial.zero(n)
    for k in range(2, n + 1):
        acc = acc - _m1k(_m1k_bar(f, k), k)
    return reduce_mod_sphere(acc)


def mb_eigenvalue_formula(sig: BigradedSignature, strict: bool = True) -> int:
    """Closed-form eigenvalue of M_b on H*_{pvec,qvec}:

        p_1 sum_{k>=2} q_k + q_1 sum_{k>=2} p_k + (n-1) q_1 + sum_{k>=2} q_k

    ``strict`` enforces the hypothesis p_k q_k = 0 for all k; with
    ``strict=False`` the expression is simply evaluated.
    """
    if strict and not sig.is_admissible():
        raise PreconditionError(
            f"signature {sig.pvec},{sig.qvec} has a variable appearing with its conjugate"
        )
    p, q, n = sig.pvec, sig.qvec, sig.n
    return p[0] * sum(q[1:]) + q[0] * sum(p[1:]) + (n - 1) * q[0] + sum(q[1:])


def m_b_matrix(n: int, p: int, q: int) -> list[list[GaussianRational]]:
    """Matrix of M_b on the exact harmonic basis of H_{p,q}, for exploration.

    Column j holds the coordinates of M_b(e_j) in the basis.  Raises if the
    image leaves the span.
    """
    from .harmonic import harmonic_basis

    basis = list(harmonic_basis(n, p, q))
    return _matrix_in_basis(m_b, basis)


def _matrix_in_basis(op, basis: list[Polynomial]) -> list[list[GaussianRational]]:
    # Solve op(e_j) = sum_i M[i][j] e_i mod sphere by elimination over
    # reduced coordinates.
    red = [reduce_mod_sphere(b) for b in basis]
    keys = sorted({k for b in red for k in b._terms})
    index = {k: i for i, k in enumerate(keys)}
    m = len(basis)
    cols = []
    for j, b in enumerate(basis):
        img = reduce_mod_sphere(op(b))
        # augmented system rows: [basis coords | image coord]
        cols.append(img)
    out = [[GaussianRational(0)] * m for _ in range(m)]
    for j, img in enumerate(cols):
        extra = [k for k in img._terms if k not in index]
        if extra:
            raise ValueError("operator image leaves the span of the basis")
        rows = []
        for k in keys:
            row = {i: red[i].coefficient(k) for i in range(m) if red[i].coefficient(k)}
            rhs = img.coefficient(k)
            if rhs:
                row[m] = -rhs
            if row:
                rows.append(row)
        sol = exact.nullspace(rows, m + 1)
        sol = [v for v in sol if v.get(m)]
        if len(sol) != 1:
            raise ValueError("operator image leaves the span of the basis")
        v = sol[0]
        norm = v[m]
        for i in range(m):
            out[i][j] = GaussianRational.coerce(v.get(i, 0)) / norm
    return out


# -- Rossi sphere operators (n = 2) -----------------------------------------


def _need_s3(f: Polynomial) -> None:
    if f.nvars != 2:
        raise OperatorUndefined("L, Lbar and box_b^t are defined on S^3 only (nvars = 2)")


def l_raw(f: Polynomial) -> Polynomial:
    # L = zbar_1 d/dz_2 - zbar_2 d/dz_1
    _need_s3(f)
    return f.dz(2).mul_zbar(1) - f.dz(1).mul_zbar(2)


def lbar_raw(f: Polynomial) -> Polynomial:
    # Lbar = z_1 d/dzbar_2 - z_2 d/dzbar_1
    _need_s3(f)
    return f.dzbar(2).mul_z(1) - f.dzbar(1).mul_z(2)


def l_op(f: Polynomial) -> Polynomial:
    return reduce_mod_sphere(l_raw(f))


def lbar_op(f: Polynomial) -> Polynomial:
    return reduce_mod_sphere(lbar_raw(f))


def rossi_scale(t) -> Fraction:
    """(1 + |t|^2) / (1 - |t|^2)^2 for Gaussian-rational t with |t| < 1."""
    a2 = GaussianRational.coerce(t).abs2()
    if a2 >= 1:
        raise ValueError(f"|t| must be < 1, got |t|^2 = {a2}")
    return (1 + a2) / (1 - a2) ** 2


def box_b_t(f: Polynomial, t) -> Polynomial:
    """Perturbed Kohn Laplacian -c_t L_t Lbar_t f on the Rossi sphere.

    L_t = L + conj(t) Lbar and Lbar_t = Lbar + t L.
    """
    _need_s3(f)
    t = GaussianRational.coerce(t)
    c = rossi_scale(t)
    inner = lbar_raw(f) + l_raw(f).scale(t)
    outer = l_raw(inner) + lbar_raw(inner).scale(t.conjugate())
    return reduce_mod_sphere(outer.scale(-c))


# -- eigenvector checks ------------------------------------------------------

OPERATOR_NAMES = ("box_b", "m_b", "box_b_t", "l", "lbar", "euler_p", "euler_q")


@dataclass(frozen=True)
class OperatorSpec:
    name: str
    t: GaussianRational = field(default_factory=lambda: GaussianRational(0))

    def __post_init__(self):
        if self.name not in OPERATOR_NAMES:
            raise ValueError(f"unknown operator {self.name!r}")
        object.__setattr__(self, "t", GaussianRational.coerce(self.t))
        if self.name == "box_b_t" and self.t.abs2() >= 1:
            raise ValueError("box_b_t needs |t| < 1")

    def __call__(self, f: Polynomial) -> Polynomial:
        if self.name == "box_b":
            return box_b(f)
        if self.name == "m_b":
            return m_b(f)
        if self.name == "box_b_t":
            return box_b_t(f, self.t)
        if self.name == "l":
            return l_op(f)
        if self.name == "lbar":
            return lbar_op(f)
        if self.name == "euler_p":
            return reduce_mod_sphere(euler(f, "holomorphic"))
        return reduce_mod_sphere(euler(f, "antiholomorphic"))


class ZeroOnSphere(ValueError):
    pass


def eigen_check(op: OperatorSpec, f: Polynomial) -> GaussianRational | None:
    """Return lambda with op(f) = lambda f on the sphere, or ``None``.

    lambda is read off the leading monomial of the reduced image and the
    identity is then verified exactly.
    """
    rf = reduce_mod_sphere(f)
    if rf.is_zero():
        raise ZeroOnSphere("f vanishes on the sphere")
    img = op(f)
    if img.is_zero():
        return GaussianRational(0)
    key = img.leading_key()
    fc = rf.coefficient(key)
    if not fc:
        return None
    lam = img.coefficient(key) / fc
    if (img - rf.scale(lam)).is_zero():
        return lam
    return None
