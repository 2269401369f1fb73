r"""Hecke eigenvalues of a level-one scalar eigenform at large primes.

Direct Hecke operators need every coefficient up to ``4 det T ~ p^2 B``; the
route here needs only the single coefficients ``a(p T_0)`` and ``a(p^2 T_0)``
for a fixed fundamental ``T_0``.  Writing the form as a combination of
products ``F_i G_i`` of Maass lifts, each such coefficient is one convolution
over ``T_1 + T_2 = T`` in which both factors come from 1-D tables of
half-integral weight coefficients.  Sums run modulo several primes below
``2^28`` (numba kernel) and are recombined by CRT; eigenvalues are integers
bounded by the Ramanujan estimate, which certifies the reconstruction.

For ``-4 det T_0`` fundamental,

.. math::  \sum_{\delta \ge 0} a(p^\delta T_0) X^\delta
           = a(T_0) (1 - p^{k-2} X)(1 - \chi_{T_0}(p) p^{k-2} X) / Q_p(X),

``Q_p(X) = 1 - \lambda_p X + (\lambda_p^2 - \lambda_{p^2} - p^{2k-4}) X^2 - \dots``,
so ``lambda_p`` and ``lambda_{p^2}`` follow from ``a(p T_0), a(p^2 T_0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod

import numba
import numpy as np
from sympy import prevprime

from ..quadforms import kronecker
from .cohen import zeta_negative
from .expansion import SiegelExpansion
from .maasslift import ModularSeriesCache, fit_plus_combination, is_maass_lift_data, lift_c_small
from .ring import eisenstein, igusa_cusp_generators, multiply

Q_BITS = 28


def moduli(n: int) -> list[int]:
    out, q = [], 2**Q_BITS
    while len(out) < n:
        q = prevprime(q)
        out.append(q)
    return out


def _cidx(N):
    # c(N) vanishes unless N = 0, 3 mod 4; pack those two classes densely
    return (N >> 2) * 2 + (N & 1)


@dataclass(frozen=True)
class LiftFactor:
    """A Maass lift: weight, exact plus-space combination, constant term."""

    name: str
    k: int
    comb: tuple  # Fractions
    a0: Fraction = Fraction(0)

    def scaled(self, x: Fraction) -> "LiftFactor":
        return LiftFactor(f"{x}*{self.name}", self.k, tuple(x * c for c in self.comb), x * self.a0)

    def __add__(self, other: "LiftFactor") -> "LiftFactor":
        if other.k != self.k:
            raise ValueError("weights differ")
        n = max(len(self.comb), len(other.comb))
        a = self.comb + (Fraction(0),) * (n - len(self.comb))
        b = other.comb + (Fraction(0),) * (n - len(other.comb))
        return LiftFactor(f"{self.name}+{other.name}", self.k, tuple(x + y for x, y in zip(a, b)), self.a0 + other.a0)


@dataclass
class ProductForm:
    """``sum_i coef_i * F_i * G_i`` with Maass-lift factors."""

    k: int
    terms: list  # (coef: Fraction, F: LiftFactor, G: LiftFactor)

    def merged(self) -> list[tuple[LiftFactor, LiftFactor]]:
        """Pairs ``(L, R)`` with the coefficients folded into ``L`` and all left
        factors sharing a right factor (and weight) summed."""
        groups: dict = {}
        for coef, F, G in self.terms:
            key = (G, F.k)
            groups[key] = groups[key] + F.scaled(coef) if key in groups else F.scaled(coef)
        return [(L, G) for (G, _), L in groups.items()]


@numba.njit(cache=True)
def _val(tab, pw, col, nq, j, disc, g, zero_val, qs):
    # a(T) mod q_j for the lift in table column ``col``; g = content (0 for T = 0)
    if g == 0:
        return zero_val[col, j]
    if g == 1:
        return np.int64(tab[(disc >> 2) * 2 + (disc & 1), col * nq + j])
    s = np.int64(0)
    for d in range(1, g + 1):
        if g % d == 0:
            D = disc // (d * d)
            s += pw[col, d, j] * np.int64(tab[(D >> 2) * 2 + (D & 1), col * nq + j])
            s %= qs[j]
    return s


@numba.njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@numba.njit(cache=True)
def _isqrt(n):
    r = np.int64(np.sqrt(float(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@numba.njit(cache=True)
def _convolve(A, B, C, tab, pw, zero_val, qs, left_cols, right_cols):
    """``sum_{T_1 + T_2 = T} sum_i L_i(T_1) R_i(T_2)`` modulo each ``q``.

    When ``A == C`` the swap ``(a, b, c) -> (c, b, a)`` fixes ``T`` and the
    summand, so only ``c_1 >= a_1`` is visited (off-diagonal terms doubled)."""
    nq = qs.size
    nt = left_cols.size
    res = np.zeros(nq, dtype=np.int64)
    acc = np.zeros(nq, dtype=np.uint64)
    sym = A == C
    cnt = 0
    for a1 in range(A + 1):
        a2 = A - a1
        c_lo = a1 if sym else 0
        for c1 in range(c_lo, C + 1):
            c2 = C - c1
            w = np.uint64(2) if (sym and c1 > a1) else np.uint64(1)
            r1 = _isqrt(4 * a1 * c1)
            r2 = _isqrt(4 * a2 * c2)
            lo = max(-r1, B - r2)
            hi = min(r1, B + r2)
            g1ac = _gcd(a1, c1)
            g2ac = _gcd(a2, c2)
            for b1 in range(lo, hi + 1):
                b2 = B - b1
                d1 = 4 * a1 * c1 - b1 * b1
                d2 = 4 * a2 * c2 - b2 * b2
                if g1ac == 1:
                    g1 = 1
                elif g1ac == 0:
                    g1 = abs(b1)
                else:
                    g1 = _gcd(g1ac, abs(b1))
                if g2ac == 1:
                    g2 = 1
                elif g2ac == 0:
                    g2 = abs(b2)
                else:
                    g2 = _gcd(g2ac, abs(b2))
                for j in range(nq):
                    s = np.uint64(0)
                    for i in range(nt):
                        x = _val(tab, pw, left_cols[i], nq, j, d1, g1, zero_val, qs)
                        if x == 0:
                            continue
                        y = _val(tab, pw, right_cols[i], nq, j, d2, g2, zero_val, qs)
                        s += np.uint64(x * y)
                    acc[j] += s * w
                cnt += 1
                if cnt >= 24:
                    for j in range(nq):
                        acc[j] %= np.uint64(qs[j])
                    cnt = 0
    for j in range(nq):
        res[j] = np.int64(acc[j] % np.uint64(qs[j]))
    return res


class DeepEngine:
    """Residue tables of the factors of a :class:`ProductForm` up to
    discriminant ``Nmax``."""

    def __init__(self, form: ProductForm, Nmax: int, nq: int = 9, dmax: int | None = None):
        self.form = form
        self.Nmax = Nmax
        self.qs = np.array(moduli(nq), dtype=np.int64)
        cols: list[LiftFactor] = []

        def col(F: LiftFactor) -> int:
            if F not in cols:
                cols.append(F)
            return cols.index(F)

        pairs = form.merged()
        self.left_cols = np.array([col(L) for L, _ in pairs], dtype=np.int64)
        self.right_cols = np.array([col(R) for _, R in pairs], dtype=np.int64)
        self.columns = cols
        nrows = _cidx(Nmax) + 2
        self.tab = np.zeros((nrows, len(cols) * nq), dtype=np.uint32)
        dmax = dmax if dmax is not None else isqrt(Nmax) + 2
        self.pw = np.zeros((len(cols), dmax + 1, nq), dtype=np.int64)
        self.zero_val = np.zeros((len(cols), nq), dtype=np.int64)
        idx = np.arange(Nmax + 1)
        idx = idx[(idx % 4 == 0) | (idx % 4 == 3)]
        rows = (idx >> 2) * 2 + (idx & 1)
        for j, q in enumerate(self.qs.tolist()):
            cache = ModularSeriesCache(Nmax, q)
            for ci, F in enumerate(cols):
                t = cache.table(list(F.comb), F.k - 1)
                self.tab[rows, ci * nq + j] = t[idx].astype(np.uint32)
                self.pw[ci, :, j] = [pow(d, F.k - 1, q) for d in range(dmax + 1)]
                self.zero_val[ci, j] = _mod_frac(F.a0, q)

    def coefficient_mod(self, t) -> np.ndarray:
        A, B, C = t
        if 4 * A * C - B * B > self.Nmax:
            raise ValueError("target beyond table range")
        if max(A, C) >= self.pw.shape[1]:
            raise ValueError("content table too short")
        return _convolve(A, B, C, self.tab, self.pw, self.zero_val, self.qs, self.left_cols, self.right_cols)


def crt_symmetric(res, qs) -> tuple[int, int]:
    M = prod(int(q) for q in qs)
    x = 0
    for r, q in zip(res, qs):
        r, q = int(r), int(q)
        Mi = M // q
        x = (x + r * Mi * pow(Mi, -1, q)) % M
    if x > M // 2:
        x -= M
    return x, M


def _mod_frac(x: Fraction, q: int) -> int:
    return x.numerator % q * pow(x.denominator, -1, q) % q


# -- weight 20 ------------------------------------------------------------------


def lift_factors(B: int = 80) -> dict[str, LiftFactor]:
    """Plus-space data for ``E_8, E_10, chi_10, chi_12``, fitted and checked on
    all keys with ``4 det T <= B``."""
    chi10, chi12 = igusa_cusp_generators(B)
    out = {}
    for name, F, k, eis in (
        ("E8", eisenstein(8, B), 8, True),
        ("E10", eisenstein(10, B), 10, True),
        ("chi10", chi10, 10, False),
        ("chi12", chi12, 12, False),
    ):
        c0 = 2 / zeta_negative(k) if eis else Fraction(0)
        c = lift_c_small(F, c0)
        comb = fit_plus_combination(c, k - 1)
        if not is_maass_lift_data(F, c):
            raise ArithmeticError(f"{name} is not a Maass lift on the stored range")
        out[name] = LiftFactor(name, k, tuple(comb), Fraction(1) if eis else Fraction(0))
    return out


def product_coordinates(target: SiegelExpansion, products: list[SiegelExpansion]) -> list[Fraction]:
    """Exact coordinates of ``target`` in the span of ``products`` (checked on all keys)."""
    import sympy as sp

    from .hecke import _independent_keys

    B = min(target.bound, *(f.bound for f in products))
    keys = _independent_keys(products, B)
    A = sp.Matrix([[sp.Rational(str(f.coeffs.get(u, (Fraction(0),))[0])) for u in keys] for f in products]).T
    b = sp.Matrix([sp.Rational(str(target.coeffs.get(u, (Fraction(0),))[0])) for u in keys])
    x = A.LUsolve(b)
    coords = [Fraction(int(v.p), int(v.q)) for v in x]
    from .expansion import linear_combination

    chk = linear_combination(coords, products)
    for t in chk.coeffs:
        if chk.coeffs[t][0] != target.coeffs.get(t, (Fraction(0),))[0]:
            raise ArithmeticError("target not in the span of the products")
    return coords


def weight20_product_form(upsilon: SiegelExpansion, B: int = 80) -> ProductForm:
    """``Upsilon_20 = x_1 chi_10^2 + x_2 E_10 chi_10 + x_3 E_8 chi_12``."""
    lf = lift_factors(B)
    chi10, chi12 = igusa_cusp_generators(B)
    E8, E10 = eisenstein(8, B), eisenstein(10, B)
    prods = [multiply(chi10, chi10), multiply(E10, chi10), multiply(E8, chi12)]
    x = product_coordinates(upsilon.truncate(B) if upsilon.bound > B else upsilon, prods)
    return ProductForm(20, [(x[0], lf["chi10"], lf["chi10"]), (x[1], lf["E10"], lf["chi10"]), (x[2], lf["E8"], lf["chi12"])])


@dataclass
class DeepEigenvalues:
    k: int
    t0: tuple
    a_t0: Fraction
    lam: dict  # p -> int
    lam2: dict  # p -> int

    def to_json(self) -> dict:
        ps = sorted(set(self.lam) | set(self.lam2))
        return {
            "level": 1,
            "weight": [self.k, 0],
            "primes": {str(p): {"lam_p": self.lam[p], "lam_p2": self.lam2.get(p)} for p in ps if p in self.lam},
            "atkin_lehner": {},
            "local_type": {},
        }


def _reconstruct(res, qs, a_t0: Fraction, shift: int, bound: float) -> int:
    """Integer ``x = a/a(T_0) + shift`` from residues of ``a``; refuses if the
    CRT modulus does not dominate ``2 * bound`` by a 2^40 margin."""
    vals = []
    for r, q in zip(res.tolist(), qs.tolist()):
        vals.append((int(r) * _mod_frac(1 / a_t0, q) + shift) % q)
    x, M = crt_symmetric(vals, qs)
    if M < 2 * bound * 2**40:
        raise ArithmeticError("CRT modulus too small for the eigenvalue bound")
    if abs(x) > bound:
        raise ArithmeticError(f"reconstructed value {x} violates the Ramanujan bound")
    return x


def deep_eigenvalues(engine: DeepEngine, a_t0: Fraction, t0, disc_t0: int, primes, square_primes=(), progress=None) -> DeepEigenvalues:
    r"""``lambda_p`` for ``p`` in ``primes`` and ``lambda_{p^2}`` for ``p`` in
    ``square_primes`` (integers, weight ``k``, level one)."""
    k = engine.form.k
    w = 2 * k - 3
    lam, lam2 = {}, {}
    for p in sorted(set(primes) | set(square_primes)):
        chi = kronecker(disc_t0, p)
        r = engine.coefficient_mod(tuple(p * x for x in t0))
        lam[p] = _reconstruct(r, engine.qs, a_t0, p ** (k - 2) * (1 + chi), 4.0 * p ** (w / 2) + 1)
        if p in square_primes:
            r2 = engine.coefficient_mod(tuple(p * p * x for x in t0))
            # lambda_{p^2} = a(p^2 T0)/a(T0) + (1 + chi)(p^{k-2} lambda_p - p^{2k-4})
            shift = (1 + chi) * (p ** (k - 2) * lam[p] - p ** (2 * k - 4))
            lam2[p] = _reconstruct(r2, engine.qs, a_t0, shift, 25.0 * p**w + 1)
        if progress:
            progress(p, lam[p], lam2.get(p))
    return DeepEigenvalues(k, tuple(t0), a_t0, lam, lam2)
