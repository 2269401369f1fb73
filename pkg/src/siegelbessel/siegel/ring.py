r"""Eisenstein series, products, and the cusp forms of the graded ring
``C[E_4, E_6, chi_10, chi_12]`` of even-weight level-one Siegel forms."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy import Matrix, Rational

from .cohen import cohen_H, zeta_negative
from .expansion import SiegelExpansion, TruncationError, WeightData, linear_combination
from .halfint import Key, content, disc, reduce_key, reduced_keys


def _sigma(n: int, s: int) -> int:
    return sum(d**s for d in range(1, n + 1) if n % d == 0)


def elliptic_eisenstein_coeff(k: int, n: int) -> Fraction:
    """Coefficient of ``q^n`` in the elliptic ``E_k`` with constant term 1."""
    if n == 0:
        return Fraction(1)
    return Fraction(2, 1) / zeta_negative(k) * _sigma(n, k - 1)


def eisenstein_coeff(k: int, t: Key) -> Fraction:
    r"""Coefficient of the degree-2 Siegel Eisenstein series ``E_k`` (``a(0) = 1``):

    .. math::  a(T) = \frac{2}{\zeta(1-k)\zeta(3-2k)} \sum_{d | cont(T)} d^{k-1} H(k-1, 4\det T / d^2).
    """
    if t == (0, 0, 0):
        return Fraction(1)
    D = disc(t)
    g = content(t)
    s = Fraction(0)
    for d in range(1, g + 1):
        if g % d == 0:
            s += d ** (k - 1) * cohen_H(k - 1, D // (d * d))
    return 2 * s / (zeta_negative(k) * zeta_negative(2 * k - 2))


def eisenstein(k: int, B: int) -> SiegelExpansion:
    """Siegel Eisenstein series of even weight ``k >= 4`` to ``4 det T <= B``."""
    if k % 2 or k < 4:
        raise ValueError("even k >= 4 required")
    coeffs = {t: (eisenstein_coeff(k, t),) for t in reduced_keys(B)}
    sing = {m: (elliptic_eisenstein_coeff(k, m),) for m in range(0, B + 1)}
    F = SiegelExpansion(WeightData(k), 1, B, coeffs, sing, B, False, {"name": f"E{k}"})
    return F


def unit_form(B: int) -> SiegelExpansion:
    return SiegelExpansion(WeightData(0), 1, B, {}, {0: (Fraction(1),)}, B, False, {"name": "1"})


class _ScalarView:
    """Integer-scaled scalar lookup with memoization (weights even)."""

    def __init__(self, F: SiegelExpansion):
        if F.weight.r != 0 or F.weight.k % 2:
            raise ValueError("multiply needs even scalar weight")
        vals = [v[0] for v in F.coeffs.values()] + [v[0] for v in F.singular.values()]
        den = 1
        for x in vals:
            den = den * x.denominator // gcd(den, x.denominator)
        self.den = den
        self.pos = {t: int(v[0] * den) for t, v in F.coeffs.items()}
        self.sing = {m: int(v[0] * den) for m, v in F.singular.items()}
        self.F = F
        self.memo: dict = {}

    def __call__(self, t: Key) -> int:
        v = self.memo.get(t)
        if v is not None:
            return v
        a, b, c = t
        d = 4 * a * c - b * b
        if d == 0:
            m = gcd(gcd(a, b), c)
            if m in self.sing:
                v = self.sing[m]
            elif self.F.cusp and m > 0:
                v = 0
            elif m > self.F.singular_bound:
                raise TruncationError(f"singular content {m} not stored")
            else:
                v = 0
        else:
            if d > self.F.bound:
                raise TruncationError(f"{t} beyond bound")
            v = self.pos.get(reduce_key(t), 0)
        self.memo[t] = v
        return v


def splits(t: Key):
    """All ``T_1`` with ``0 <= T_1 <= T`` (both ``T_1`` and ``T - T_1`` positive
    semi-definite and semi-integral)."""
    a, b, c = t
    for a1 in range(a + 1):
        a2 = a - a1
        for c1 in range(c + 1):
            c2 = c - c1
            r1 = isqrt(4 * a1 * c1)
            r2 = isqrt(4 * a2 * c2)
            lo = max(-r1, b - r2)
            hi = min(r1, b + r2)
            for b1 in range(lo, hi + 1):
                yield (a1, b1, c1)


def multiply(F: SiegelExpansion, G: SiegelExpansion, B: int | None = None) -> SiegelExpansion:
    r"""Product of two scalar even-weight expansions, truncated at
    ``min(B_F, B_G)`` (or ``B`` if smaller)."""
    Bout = min(F.bound, G.bound) if B is None else B
    if Bout > min(F.bound, G.bound):
        raise TruncationError("requested bound exceeds input bounds")
    if F.level != G.level:
        raise ValueError("level mismatch")
    fv, gv = _ScalarView(F), _ScalarView(G)
    den = Fraction(1, fv.den * gv.den)
    coeffs = {}
    for t in reduced_keys(Bout):
        s = 0
        a, b, c = t
        for t1 in splits(t):
            x = fv(t1)
            if x:
                y = gv((a - t1[0], b - t1[1], c - t1[2]))
                if y:
                    s += x * y
        coeffs[t] = (s * den,)
    cusp = F.cusp or G.cusp
    sing: dict = {}
    SB = 0
    if not cusp:
        SB = min(F.singular_bound, G.singular_bound)
        for m in range(SB + 1):
            s = sum(fv((m1, 0, 0)) * gv((m - m1, 0, 0)) for m1 in range(m + 1))
            sing[m] = (s * den,)
    name = f"({F.meta.get('name', '?')})*({G.meta.get('name', '?')})"
    return SiegelExpansion(WeightData(F.weight.k + G.weight.k), F.level, Bout, coeffs, sing, SB, cusp, {"name": name})


def multiply_bruteforce(F: SiegelExpansion, G: SiegelExpansion, t: Key) -> Fraction:
    """Oracle: sum over every semi-integral ``T_1`` in a box, keeping the
    positive semi-definite splits; lookups go through the generic ``__getitem__``."""
    a, b, c = t
    s = Fraction(0)
    R = 2 * isqrt(a * c) + 2
    for a1 in range(0, a + 1):
        for c1 in range(0, c + 1):
            for b1 in range(-R - abs(b), R + abs(b) + 1):
                t1 = (a1, b1, c1)
                t2 = (a - a1, b - b1, c - c1)
                if 4 * a1 * c1 - b1 * b1 < 0 or 4 * t2[0] * t2[2] - t2[1] * t2[1] < 0:
                    continue
                s += F[t1][0] * G[t2][0]
    return s


def power(F: SiegelExpansion, e: int, B: int | None = None) -> SiegelExpansion:
    out = unit_form(F.bound if B is None else B)
    for _ in range(e):
        out = multiply(out, F, B)
    return out


def _singular_system(forms: list[SiegelExpansion], mmax: int) -> Matrix:
    rows = []
    for m in range(0, mmax + 1):
        rows.append([Rational(f[(m, 0, 0)][0].numerator, f[(m, 0, 0)][0].denominator) for f in forms])
    return Matrix(rows)


def cusp_kernel(forms: list[SiegelExpansion], mmax: int | None = None) -> list[list[Fraction]]:
    """Exact basis of the combinations of ``forms`` whose singular coefficients
    all vanish (Siegel Phi-operator kernel)."""
    mmax = mmax if mmax is not None else min(f.singular_bound for f in forms)
    A = _singular_system(forms, mmax)
    ker = A.nullspace()
    out = []
    for v in ker:
        den = 1
        for x in v:
            den = den * int(x.q) // gcd(den, int(x.q))
        out.append([Fraction(int(x.p) * (den // int(x.q))) for x in v])
    return out


def _as_cusp(F: SiegelExpansion, name: str) -> SiegelExpansion:
    if any(x != 0 for v in F.singular.values() for x in v):
        raise ArithmeticError(f"{name}: singular coefficients do not vanish")
    F.singular = {}
    F.singular_bound = 0
    F.cusp = True
    F.meta["name"] = name
    return F


@lru_cache(maxsize=8)
def igusa_cusp_generators(B: int) -> tuple[SiegelExpansion, SiegelExpansion]:
    r"""``chi_10`` and ``chi_12`` from exact kernel computations, normalized by
    ``a([[1, 1/2], [1/2, 1]]) = 1``."""
    if B < 16:
        raise ValueError("bound >= 16 required")
    E4, E6, E10, E12 = (eisenstein(k, B) for k in (4, 6, 10, 12))
    E4E6 = multiply(E4, E6)
    E4_3 = multiply(multiply(E4, E4), E4)
    E6_2 = multiply(E6, E6)
    out = []
    for cands, name in (([E4E6, E10], "chi10"), ([E4_3, E6_2, E12], "chi12")):
        ker = cusp_kernel(cands)
        if len(ker) != 1:
            raise ArithmeticError(f"{name}: cusp kernel has dimension {len(ker)}")
        F = _as_cusp(linear_combination(ker[0], cands), name)
        x = F.coeffs[(1, 1, 1)][0]
        if x == 0:
            raise ArithmeticError(f"{name}: a(1,1,1) = 0")
        F = F.scale(1 / x)
        F.meta.update(name=name, combination=[str(c / x) for c in ker[0]])
        out.append(F)
    return out[0], out[1]


def generators(B: int) -> dict:
    chi10, chi12 = igusa_cusp_generators(B)
    return {"E4": eisenstein(4, B), "E6": eisenstein(6, B), "chi10": chi10, "chi12": chi12}


def monomial_exponents(k: int) -> list[tuple[int, int, int, int]]:
    out = []
    for d in range(k // 12 + 1):
        for c in range((k - 12 * d) // 10 + 1):
            rest = k - 12 * d - 10 * c
            for b in range(rest // 6 + 1):
                if (rest - 6 * b) % 4 == 0:
                    out.append(((rest - 6 * b) // 4, b, c, d))
    return sorted(out)


def monomial(exps, gens: dict, B: int) -> SiegelExpansion:
    a, b, c, d = exps
    out = unit_form(B)
    for name, e in zip(("E4", "E6", "chi10", "chi12"), exps):
        for _ in range(e):
            out = multiply(out, gens[name], B)
    out.meta["name"] = f"E4^{a} E6^{b} chi10^{c} chi12^{d}"
    return out


def coefficient_rank(forms: list[SiegelExpansion], keys: list[Key]) -> int:
    M = Matrix([[Rational(f.coeffs.get(t, (0,))[0].numerator, f.coeffs.get(t, (Fraction(0),))[0].denominator)
                 for t in keys] for f in forms])
    return M.rank()


def cusp_space(k: int, B: int) -> list[SiegelExpansion]:
    """Exact basis of ``S_k(Sp_4(Z))`` (even ``k``) truncated at ``4 det T <= B``."""
    if k % 2:
        raise ValueError("odd weights are not generated by the even ring")
    if k > 30:
        raise ValueError("desk-scale weights only (k <= 30)")
    exps = monomial_exponents(k)
    if not exps:
        return []
    gens = generators(B)
    mons = [monomial(e, gens, B) for e in exps]
    ker = cusp_kernel(mons, min(B, 4 * k)) if any(not m.cusp for m in mons) else [
        [Fraction(int(i == j)) for j in range(len(mons))] for i in range(len(mons))
    ]
    basis = []
    for v in ker:
        F = linear_combination(v, mons)
        F = _as_cusp(F, f"S{k}[{len(basis)}]")
        basis.append(F)
    keys = reduced_keys(B)
    if basis and coefficient_rank(basis, keys) != len(basis):
        raise TruncationError("bound too small to certify linear independence")
    return basis
