r"""Maass lifts through their half-integral weight generating series.

A level-one Maass lift ``F`` of weight ``k`` has

.. math::  a(F, T) = \sum_{d | cont(T)} d^{k-1} c(4\det T / d^2)

with ``sum_N c(N) q^N`` in Kohnen's plus space of weight ``k - 1/2``.  That
space sits inside ``M_{r+1/2}(Gamma_0(4))`` (``r = k - 1``), which has the
basis ``theta^{2r+1-4j} F_2^j``; the combination for a given ``F`` is fitted
exactly from its small coefficients and then evaluated to large ``N``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import sympy as sp
from flint import fmpz_poly, nmod_poly

from .expansion import SiegelExpansion


def theta_coeffs(N: int) -> list[int]:
    """``theta = sum_{n in Z} q^{n^2}`` to ``q^N``."""
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, isqrt(N) + 1):
        c[n * n] = 2
    return c


def f2_coeffs(N: int) -> list[int]:
    """``F_2 = sum_{n odd} sigma_1(n) q^n`` to ``q^N``."""
    sig = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1, 2):
        sig[d::2 * d] += d
    return [int(x) for x in sig]


def basis_exponents(r: int) -> list[tuple[int, int]]:
    return [(2 * r + 1 - 4 * j, j) for j in range((2 * r + 1) // 4 + 1)]


def half_integral_basis(r: int, N: int, modulus: int | None = None) -> list:
    """Series ``theta^a F_2^b`` (truncated after ``q^N``) as ``fmpz_poly``, or
    ``nmod_poly`` if ``modulus`` is given."""
    n = N + 1
    if modulus is None:
        th, f2 = fmpz_poly(theta_coeffs(N)), fmpz_poly(f2_coeffs(N))
        one = fmpz_poly([1])
    else:
        th = nmod_poly([x % modulus for x in theta_coeffs(N)], modulus)
        f2 = nmod_poly([x % modulus for x in f2_coeffs(N)], modulus)
        one = nmod_poly([1], modulus)
    out = []
    for a, b in basis_exponents(r):
        s = th.pow_trunc(a, n) if a else one
        if b:
            s = s.mul_low(f2.pow_trunc(b, n), n)
        out.append(s)
    return out


def lift_c_small(F: SiegelExpansion, c0: Fraction = Fraction(0)) -> dict[int, Fraction]:
    """``c(N)`` for ``N <= bound`` read off primitive keys ``(1, N mod 2, *)``."""
    out = {0: Fraction(c0)}
    for N in range(1, F.bound + 1):
        if N % 4 in (0, 3):
            b = N % 2
            out[N] = F[(1, b, (N + b * b) // 4)][0]
        else:
            out[N] = Fraction(0)
    return out


def fit_plus_combination(c: dict[int, Fraction], r: int) -> list[Fraction]:
    """Exact coefficients ``x_j`` with ``sum_j x_j theta^{a_j} F_2^{b_j} = sum c(N) q^N``
    on every supplied ``N``; raises if the system is inconsistent."""
    N = max(c)
    basis = half_integral_basis(r, N)
    rows = [[sp.Integer(int(s[n])) for s in basis] for n in range(N + 1)]
    A = sp.Matrix(rows)
    rhs = sp.Matrix([sp.Rational(c[n].numerator, c[n].denominator) for n in range(N + 1)])
    sol, params = A.gauss_jordan_solve(rhs)
    if params.shape[0]:
        raise ArithmeticError("plus-space fit underdetermined; raise the bound")
    return [Fraction(int(x.p), int(x.q)) for x in sol]


def is_maass_lift_data(F: SiegelExpansion, c: dict[int, Fraction]) -> bool:
    """Check ``a(T) = sum_d d^{k-1} c(4 det T/d^2)`` on all stored keys."""
    k = F.weight.k
    for t, v in F.coeffs.items():
        g = gcd(gcd(t[0], t[1]), t[2])
        D = 4 * t[0] * t[2] - t[1] * t[1]
        s = sum(d ** (k - 1) * c[D // (d * d)] for d in range(1, g + 1) if g % d == 0)
        if s != v[0]:
            return False
    return True


class ModularSeriesCache:
    """``theta^{2r+1}`` and ``g = F_2 / theta^4`` modulo ``q`` to ``q^N``, so that
    ``sum_j x_j theta^{2r+1-4j} F_2^j = theta^{2r+1} P(g)`` is one Horner pass."""

    def __init__(self, N: int, q: int):
        self.N, self.q = N, q
        n = N + 1
        self.theta = nmod_poly([x % q for x in theta_coeffs(N)], q)
        f2 = nmod_poly([x % q for x in f2_coeffs(N)], q)
        th4 = self.theta.pow_trunc(4, n)
        self.g = f2.mul_low(th4.inverse_series_trunc(n), n)
        self._pow: dict = {}

    def theta_power(self, e: int):
        if e not in self._pow:
            self._pow[e] = self.theta.pow_trunc(e, self.N + 1)
        return self._pow[e]

    def table(self, comb: list, r: int) -> np.ndarray:
        q, n = self.q, self.N + 1
        xs = [x.numerator % q * pow(x.denominator, -1, q) % q for x in comb]
        acc = nmod_poly([xs[-1]], q)
        for x in reversed(xs[:-1]):
            acc = acc.mul_low(self.g, n) + nmod_poly([x], q)
        acc = acc.mul_low(self.theta_power(2 * r + 1), n)
        c = np.array([int(v) for v in acc.coeffs()], dtype=np.int64)
        return np.pad(c, (0, n - c.size))


def c_table_mod(comb: list, r: int, N: int, q: int) -> np.ndarray:
    """``c(0..N) mod q`` from an exact plus-space combination."""
    return ModularSeriesCache(N, q).table(comb, r)


def c_table_exact(comb: list[Fraction], r: int, N: int) -> list[Fraction]:
    basis = half_integral_basis(r, N)
    out = []
    for n in range(N + 1):
        out.append(sum((x * int(s[n]) for x, s in zip(comb, basis)), Fraction(0)))
    return out
