r"""Local Euler factors in the analytic normalization (centre ``s = 1/2``).

A factor is stored as the coefficient list of ``P(X) = 1 + c_1 X + ... + c_d X^d``
with ``L_p(s) = P(p^{-s})^{-1}``.  Coefficients may be ``int``, ``Fraction``,
``complex`` or sympy numbers; all the algebra below goes through power sums,
which keeps it exact whenever the inputs are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class EulerFactor:
    """``poly = (1, c_1, ..., c_d)``.  ``exact_order`` is the largest ``e`` for
    which the coefficient of ``p^{-es}`` in ``1/poly`` is trustworthy (``None``
    means all orders)."""

    p: int
    poly: tuple
    exact_order: int | None = None

    def __post_init__(self):
        if self.poly[0] != 1:
            raise ValueError("Euler factor must have constant term 1")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def inverse_series(self, emax: int) -> list:
        """Coefficients ``b_0..b_emax`` of ``1/poly``."""
        c = self.poly
        b = [c[0] * 0 + 1]
        for e in range(1, emax + 1):
            s = 0
            for i in range(1, min(e, len(c) - 1) + 1):
                s = s - c[i] * b[e - i]
            b.append(s)
        return b

    def __call__(self, X):
        return sum(ci * X**i for i, ci in enumerate(self.poly))


def power_sums(poly: Sequence, mmax: int) -> list:
    """``p_1..p_mmax`` of the reciprocal roots of ``poly`` (index 0 unused)."""
    c = list(poly) + [0] * max(0, mmax + 1 - len(poly))
    p = [None] * (mmax + 1)
    for m in range(1, mmax + 1):
        s = -m * c[m]
        for i in range(1, m):
            s = s - c[i] * p[m - i]
        p[m] = s
    return p


def from_power_sums(p: Sequence, d: int) -> list:
    """Inverse of :func:`power_sums`: polynomial ``1 + c_1 X + ... + c_d X^d``."""
    c = [1]
    for m in range(1, d + 1):
        s = 0
        for i in range(1, m + 1):
            s = s + p[i] * c[m - i]
        if isinstance(s, int):
            s = Fraction(s)
        c.append(-s / m)
    return [_tidy(x) for x in c]


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def motivic_weight(k: int, r: int = 0) -> int:
    """``w = k_1 + k_2 - 3`` for ``det^k Sym^{2r}``, i.e. ``(k_1, k_2) = (k + 2r, k)``."""
    return 2 * k + 2 * r - 3


def spinor_factor(lam_p, lam_p2, k: int, r: int, p: int) -> EulerFactor:
    r"""Degree-4 spinor factor at an unramified ``p``.

    Classically ``Q_p(X) = 1 - l X + (l^2 - l_2 - p^{w-1}) X^2 - l p^w X^3 + p^{2w} X^4``
    with ``l = lambda(p)``, ``l_2 = lambda(p^2)`` and ``w`` the motivic weight.
    Returned after ``X -> p^{-w/2} X``.  ``lam_p2=None`` yields a factor valid
    only to first order (enough for Dirichlet coefficients with ``p^2 \nmid n``).
    """
    w = motivic_weight(k, r)
    if w % 2 == 0:
        raise ValueError("even motivic weight")
    s = float(p) ** (-w / 2)
    c1 = -lam_p * s
    if lam_p2 is None:
        return EulerFactor(p, (1, c1), exact_order=1)
    c2 = Fraction(lam_p * lam_p - lam_p2 - p ** (w - 1), p**w) if _is_rational(lam_p, lam_p2) else (
        (lam_p * lam_p - lam_p2 - p ** (w - 1)) / p**w
    )
    return EulerFactor(p, (1, c1, c2, c1, 1))


def spinor_factor_classical(lam_p, lam_p2, k: int, r: int, p: int) -> tuple:
    """Unnormalized ``Q_p(X)`` (exact when the eigenvalues are)."""
    w = motivic_weight(k, r)
    return (1, -lam_p, lam_p * lam_p - lam_p2 - p ** (w - 1), -lam_p * p**w, p ** (2 * w))


def _is_rational(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def gl2_factor(a_p, weight: int, p: int, level: int = 1, chi_p=1) -> EulerFactor:
    r"""Factor of a weight-``weight`` newform: ``1 - a_p p^{-(weight-1)/2} X + chi(p) X^2``
    (the quadratic term drops when ``p | level``)."""
    s = float(p) ** (-(weight - 1) / 2)
    if level % p == 0:
        return EulerFactor(p, (1, -a_p * s))
    return EulerFactor(p, (1, -a_p * s, chi_p))


def dirichlet_factor(chi_p) -> tuple:
    return (1, -chi_p)


def tensor_factor(A: EulerFactor, B: EulerFactor) -> EulerFactor:
    r"""Factor whose reciprocal roots are the products ``alpha_i beta_j``."""
    if A.p != B.p:
        raise ValueError("prime mismatch")
    d = A.degree * B.degree
    pa, pb = power_sums(A.poly, d), power_sums(B.poly, d)
    p = [None] + [pa[m] * pb[m] for m in range(1, d + 1)]
    orders = [o for o in (A.exact_order, B.exact_order) if o is not None]
    poly = from_power_sums(p, d)
    return EulerFactor(A.p, tuple(poly), min(orders) if orders else None)


def twist_factor(A: EulerFactor, chi_p) -> EulerFactor:
    """Roots scaled by ``chi(p)``; ``chi(p) = 0`` gives the trivial factor."""
    poly = tuple(c * chi_p**i for i, c in enumerate(A.poly))
    while len(poly) > 1 and poly[-1] == 0:
        poly = poly[:-1]
    return EulerFactor(A.p, poly, A.exact_order)


def product_factor(A: EulerFactor, B: EulerFactor) -> EulerFactor:
    """Factor of ``L_A L_B``: polynomial product."""
    poly = [0] * (A.degree + B.degree + 1)
    for i, a in enumerate(A.poly):
        for j, b in enumerate(B.poly):
            poly[i + j] = poly[i + j] + a * b
    orders = [o for o in (A.exact_order, B.exact_order) if o is not None]
    return EulerFactor(A.p, tuple(poly), min(orders) if orders else None)


def adjoint_factor(S: EulerFactor, tol: float = 1e-8) -> EulerFactor:
    r"""Degree-10 adjoint factor from a degree-4 spinor factor.

    The adjoint representation of the dual group ``Sp_4`` is ``Sym^2`` of the
    4-dimensional one, so ``p_m(Ad) = (p_m^2 + p_{2m}) / 2``.  The input must be
    of symplectic shape (palindromic, ``c_4 = 1``)."""
    if S.degree != 4:
        raise ValueError("spinor factor must have degree 4")
    c = S.poly
    if abs(complex(c[4]) - 1) > tol or abs(complex(c[3]) - complex(c[1])) > tol:
        raise ValueError("spinor factor violates the symplectic symmetry")
    ps = power_sums(c, 20)
    p = [None] + [(ps[m] * ps[m] + ps[2 * m]) / 2 for m in range(1, 11)]
    return EulerFactor(S.p, tuple(from_power_sums(p, 10)), S.exact_order)


def jp_factor(p: int, label: str) -> Fraction:
    r"""Local multiplier ``J_p`` at ``p | N``."""
    mult = {"IIIa": 1, "VIb": 2, "other": 0}
    if label not in mult:
        raise ValueError(f"unknown local type {label!r}")
    return (1 + Fraction(1, p * p)) * (1 + Fraction(1, p)) * mult[label]


def gamma_constants(k: int, r: int):
    r"""Archimedean constants ``(L_inf(1/2, pi x AI), L_inf(1, pi, Ad))`` as exact
    sympy expressions."""
    import sympy as sp

    if k < 2:
        raise ValueError("k >= 2 required")
    pi2 = 2 * sp.pi
    c_center = 2**4 * pi2 ** (-2 * (k + r)) * sp.gamma(k + r - 1) ** 2 * sp.gamma(r + 1) ** 2
    c_adj = (
        2**6
        * pi2 ** (-(4 * k + 6 * r + 1))
        * sp.gamma(k + 2 * r)
        * sp.gamma(k - 1)
        * sp.gamma(2 * r + 2)
        * sp.gamma(2 * k + 2 * r - 2)
    )
    return c_center, c_adj


def divisor_bound(e: int, d: int) -> int:
    """Ramanujan-type bound ``d_d(p^e)`` for a degree-``d`` coefficient."""
    return comb(e + d - 1, d - 1)


def as_complex_poly(f: EulerFactor) -> np.ndarray:
    return np.array([complex(c) for c in f.poly])
