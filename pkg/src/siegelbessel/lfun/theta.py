r"""The automorphic induction ``AI(Lambda)`` of a class-group character, as a
theta series ``w_E^{-1} sum_c Lambda(c) theta_{f_c}``."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import flint
import numpy as np

from ..quadforms import BQF, ClassCharacter, ClassGroup, kronecker
from .euler import EulerFactor


def representation_counts(f: BQF, M: int) -> np.ndarray:
    """``r_f(n) = #{(x, y) : f(x, y) = n}`` for ``0 <= n <= M``."""
    a, b, c = f
    D = f.D
    counts = np.zeros(M + 1, dtype=np.int64)
    ymax = isqrt(4 * a * M // D) + 1
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + c y^2 <= M
        disc = b * b * y * y - 4 * a * (c * y * y - M)
        if disc < 0:
            continue
        r = isqrt(disc)
        lo = (-b * y - r) // (2 * a) - 1
        hi = (-b * y + r) // (2 * a) + 1
        x = np.arange(lo, hi + 1, dtype=np.int64)
        v = a * x * x + b * y * x + c * y * y
        v = v[v <= M]
        counts += np.bincount(v, minlength=M + 1)
    return counts


@dataclass
class ThetaForm:
    D: int
    character: ClassCharacter
    coeffs: np.ndarray  # a_0 .. a_M (complex)

    @property
    def M(self) -> int:
        return self.coeffs.size - 1


def ai_theta(G: ClassGroup, chi: ClassCharacter, M: int) -> ThetaForm:
    vals = chi.values()
    a = np.zeros(M + 1, dtype=complex)
    for i, f in enumerate(G.reduced):
        a += vals[i] * representation_counts(f, M)
    a /= G.wE
    return ThetaForm(G.D, chi, a)


def ai_theta_exact(G: ClassGroup, chi: ClassCharacter, M: int) -> list:
    r"""Coefficients as elements of ``Z[zeta_m]`` (``m`` the order of ``chi``),
    encoded as ``fmpz_poly`` reduced modulo the ``m``-th cyclotomic polynomial.
    The constant term is not integral in general and is returned as 0."""
    m = chi.order
    phi = flint.fmpz_poly.cyclotomic(m)
    reps = [representation_counts(f, M) for f in G.reduced]
    exps = [int(t * m) for t in chi.angles]
    out = [flint.fmpz_poly([])]
    for n in range(1, M + 1):
        coeffs = [0] * m
        for r, e in zip(reps, exps):
            if r[n]:
                if r[n] % G.wE:
                    raise ArithmeticError("representation count not divisible by w_E")
                coeffs[e] += int(r[n]) // G.wE
        out.append(flint.fmpz_poly(coeffs) % phi)
    return out


def check_multiplicative_exact(G: ClassGroup, chi: ClassCharacter, M: int) -> tuple[bool, int | None]:
    r"""Check ``a_n = prod a_{p^e}`` for all ``n <= M`` exactly; returns the
    first failing ``n`` as witness."""
    from .series import smallest_prime_factor

    m = chi.order
    phi = flint.fmpz_poly.cyclotomic(m)
    a = ai_theta_exact(G, chi, M)
    if a[1] != 1:
        return False, 1
    spf = smallest_prime_factor(M)
    for n in range(2, M + 1):
        p = int(spf[n])
        q = p
        while (n // q) % p == 0:
            q *= p
        if q == n:
            continue
        if (a[q] * a[n // q]) % phi != a[n]:
            return False, n
    return True, None


def prime_class(G: ClassGroup, p: int) -> int | None:
    """Index of the class of a prime ideal above a split or ramified ``p``."""
    D = G.D
    for b in range(0, 2 * p):
        if (b * b + D) % (4 * p) == 0:
            return G.index_of(BQF(p, b, (b * b + D) // (4 * p)))
    return None


def ai_factor(G: ClassGroup, chi: ClassCharacter, p: int) -> EulerFactor:
    r"""``L_p(s, AI(Lambda))``: ``(1 - Lambda(P)X)(1 - Lambda(Pbar)X)`` if split,
    ``1 - X^2`` if inert, ``1 - Lambda(P) X`` if ramified."""
    k = kronecker(G.D, p)
    if k == -1:
        return EulerFactor(p, (1, 0, -1))
    i = prime_class(G, p)
    lam = chi(i)
    if k == 0:
        lam = complex(round(lam.real), 0) if abs(lam.imag) < 1e-12 else lam
        return EulerFactor(p, (1, -_clean(lam)))
    lam_bar = chi(G.inverse(i))
    return EulerFactor(p, (1, -_clean(lam + lam_bar), _clean(lam * lam_bar)))


def ai_factor_exact(G: ClassGroup, chi: ClassCharacter, p: int) -> tuple:
    """Same as :func:`ai_factor` with roots of unity as rational angles."""
    k = kronecker(G.D, p)
    if k == -1:
        return ("inert",)
    i = prime_class(G, p)
    if k == 0:
        return ("ramified", chi.angles[i])
    return ("split", chi.angles[i], chi.angles[G.inverse(i)])


def _clean(z: complex, tol: float = 1e-13):
    z = complex(z)
    re = round(z.real) if abs(z.real - round(z.real)) < tol else z.real
    im = 0.0 if abs(z.imag) < tol else z.imag
    return re if im == 0.0 else complex(re, im)
