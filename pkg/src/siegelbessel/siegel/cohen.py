r"""Cohen's function ``H(r, N)`` and generalized Bernoulli numbers.

``H(r, 0) = zeta(1 - 2r)``; ``H(r, N) = 0`` for ``N = 1, 2 (mod 4)``; otherwise,
writing ``-N = D_0 f^2`` with ``D_0`` fundamental,

.. math::  H(r, N) = L(1 - r, \chi_{D_0}) \sum_{d | f} \mu(d) \chi_{D_0}(d) d^{r-1} \sigma_{2r-1}(f/d).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from ..quadforms import is_fundamental, kronecker


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """``B_n`` with ``B_1 = -1/2``."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def zeta_negative(m: int) -> Fraction:
    """``zeta(1 - m)`` for ``m >= 2``: ``-B_m / m``."""
    return -bernoulli(m) / m


@lru_cache(maxsize=None)
def generalized_bernoulli(r: int, D0: int) -> Fraction:
    r"""``B_{r, chi}`` for ``chi = (-D0 / .)`` of conductor ``D0`` (``D0 > 0``)."""
    F = D0
    s = Fraction(0)
    for a in range(1, F + 1):
        ch = kronecker(D0, a)
        if ch:
            s += ch * bernoulli_poly(r, Fraction(a, F))
    return s * Fraction(F) ** (r - 1)


def L_negative(r: int, D0: int) -> Fraction:
    """``L(1 - r, chi_{-D0})``."""
    return -generalized_bernoulli(r, D0) / r


def _mobius(n: int) -> int:
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


def _sigma(n: int, s: int) -> int:
    return sum(d**s for d in range(1, n + 1) if n % d == 0)


def fundamental_split(N: int) -> tuple[int, int]:
    """``N = D0 f^2`` with ``-D0`` fundamental (``N = 0, 3 mod 4``)."""
    best = None
    d = 1
    while d * d <= N:
        if N % (d * d) == 0 and is_fundamental(N // (d * d)):
            best = (N // (d * d), d)
        d += 1
    if best is None:
        raise ValueError(f"{N} has no fundamental part")
    return best


@lru_cache(maxsize=None)
def cohen_H(r: int, N: int) -> Fraction:
    if r < 2:
        raise ValueError("r >= 2")
    if N == 0:
        return zeta_negative(2 * r)
    if N < 0 or N % 4 in (1, 2):
        return Fraction(0)
    D0, f = fundamental_split(N)
    s = 0
    for d in range(1, f + 1):
        if f % d == 0:
            mu = _mobius(d)
            if mu:
                s += mu * kronecker(D0, d) * d ** (r - 1) * _sigma(f // d, 2 * r - 1)
    return L_negative(r, D0) * s
