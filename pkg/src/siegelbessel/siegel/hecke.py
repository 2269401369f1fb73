r"""Hecke operators ``T(p)`` on Fourier expansions, simultaneous eigenforms,
and the Maass (Saito-Kurokawa) relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from .expansion import SiegelExpansion, TruncationError, WeightData, linear_combination
from .halfint import Key, content, reduced_keys


def _sublattices(p: int):
    """Bases (as column matrices) of the ``p + 1`` index-``p`` sublattices of ``Z^2``."""
    yield ((p, 0), (0, 1))
    for j in range(p):
        yield ((1, 0), (j, p))


def _gram(U, t: Key) -> Key:
    # U^t T U in (a, b, c) coordinates; columns of U are the new basis
    (u11, u12), (u21, u22) = U
    a, b, c = t
    A = a * u11 * u11 + b * u11 * u21 + c * u21 * u21
    C = a * u12 * u12 + b * u12 * u22 + c * u22 * u22
    Bq = 2 * a * u11 * u12 + b * (u11 * u22 + u12 * u21) + 2 * c * u21 * u22
    return (A, Bq, C)


def hecke_coefficient(F: SiegelExpansion, p: int, t: Key) -> Fraction:
    r"""``a(T; F|T(p)) = a(pT) + p^{k-2} sum_{L'} a(T|_{L'}/p) + p^{2k-3} a(T/p)``
    (scalar weight ``k``, ``p`` prime to the level); ``L'`` runs over the
    index-``p`` sublattices and only semi-integral arguments contribute."""
    k = F.weight.k
    a, b, c = t
    s = F[(p * a, p * b, p * c)][0]
    mid = Fraction(0)
    for U in _sublattices(p):
        A, Bq, C = _gram(U, t)
        if A % p == 0 and Bq % p == 0 and C % p == 0:
            mid += F[(A // p, Bq // p, C // p)][0]
    s += p ** (k - 2) * mid
    if a % p == 0 and b % p == 0 and c % p == 0:
        s += p ** (2 * k - 3) * F[(a // p, b // p, c // p)][0]
    return s


def hecke_Tp(F: SiegelExpansion, p: int) -> SiegelExpansion:
    """``F | T(p)`` truncated at ``bound // p^2``."""
    if F.weight.r != 0:
        raise NotImplementedError("vector-valued T(p) not implemented")
    if F.level % p == 0:
        raise ValueError("p divides the level")
    B = F.bound // (p * p)
    if B < 3:
        raise TruncationError(f"bound {F.bound} too small for T({p})")
    coeffs = {t: (hecke_coefficient(F, p, t),) for t in reduced_keys(B)}
    out = SiegelExpansion(F.weight, F.level, B, coeffs, {}, 0, True, dict(F.meta))
    if not F.cusp:
        out.cusp = False
        # singular part: Phi(F|T(p)) = (1 + p^{k-2}) Phi(F)|T_p (elliptic)
        SB = F.singular_bound // p
        out.singular_bound = SB
        for m in range(SB + 1):
            out.singular[(m)] = (hecke_coefficient(F, p, (m, 0, 0)),)
    out.meta.setdefault("hecke", []).append(p)
    return out


@dataclass
class HeckeEigenData:
    level: int
    weight: WeightData
    eigenvalues: dict = field(default_factory=dict)  # p -> (lam_p, lam_p2)
    atkin_lehner: dict = field(default_factory=dict)
    local_type: dict = field(default_factory=dict)
    field_poly: tuple | None = None  # minimal polynomial (coefficients, high first) if not rational
    approx: dict = field(default_factory=dict)  # p -> complex approximations

    def to_json(self) -> dict:
        def enc(x):
            if x is None:
                return None
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else int(x)
            if isinstance(x, int):
                return x
            return str(x)

        return {
            "level": self.level,
            "weight": [self.weight.k, self.weight.r],
            "primes": {str(p): {"lam_p": enc(l1), "lam_p2": enc(l2)} for p, (l1, l2) in sorted(self.eigenvalues.items())},
            "atkin_lehner": {str(p): s for p, s in self.atkin_lehner.items()},
            "local_type": {str(p): s for p, s in self.local_type.items()},
        }

    @classmethod
    def from_json(cls, d: dict) -> "HeckeEigenData":
        def dec(x):
            if x is None:
                return None
            if isinstance(x, int):
                return x
            return Fraction(x)

        ev = {int(p): (dec(v["lam_p"]), dec(v.get("lam_p2"))) for p, v in d["primes"].items()}
        return cls(
            int(d["level"]),
            WeightData(int(d["weight"][0]), int(d["weight"][1])),
            ev,
            {int(p): int(s) for p, s in d.get("atkin_lehner", {}).items()},
            {int(p): s for p, s in d.get("local_type", {}).items()},
        )


def _to_sympy(x: Fraction):
    return sp.Rational(x.numerator, x.denominator)


def _independent_keys(basis: list[SiegelExpansion], B: int) -> list[Key]:
    """Greedy choice of ``dim`` keys (within bound ``B``) on which the basis is independent."""
    chosen: list[Key] = []
    rank = 0
    for t in reduced_keys(B):
        trial = chosen + [t]
        M = sp.Matrix([[_to_sympy(f.coeffs.get(u, (Fraction(0),))[0]) for u in trial] for f in basis])
        r = M.rank()
        if r > rank:
            chosen, rank = trial, r
            if rank == len(basis):
                return chosen
    raise TruncationError("basis not independent on the available truncation")


def hecke_matrix(basis: list[SiegelExpansion], p: int) -> sp.Matrix:
    r"""Matrix ``M`` with ``T(p) F_i = sum_j M[i, j] F_j``, checked on every key
    of the valid truncation."""
    B = min(f.bound for f in basis) // (p * p)
    keys = _independent_keys(basis, B)
    A = sp.Matrix([[_to_sympy(f.coeffs.get(u, (Fraction(0),))[0]) for u in keys] for f in basis])
    images = [hecke_Tp(f, p) for f in basis]
    R = sp.Matrix([[_to_sympy(g.coeffs[u][0]) for u in keys] for g in images])
    M = R * A.inv()
    # verify on the full valid range
    for u in reduced_keys(B):
        for i, g in enumerate(images):
            lhs = _to_sympy(g.coeffs[u][0])
            rhs = sum(M[i, j] * _to_sympy(basis[j].coeffs.get(u, (Fraction(0),))[0]) for j in range(len(basis)))
            if lhs != rhs:
                raise ArithmeticError(f"space not T({p})-stable at {u}")
    return M


@dataclass
class Eigenform:
    form: SiegelExpansion | None  # exact rational eigenform (None if not rational)
    data: HeckeEigenData
    minpoly: tuple  # coefficients of the T(p0) minimal polynomial, high first
    coords: list  # coordinates w.r.t. the basis, sympy expressions in a root 'x' of minpoly
    root_approx: complex


def eigenforms(basis: list[SiegelExpansion], primes=(2,)) -> list[Eigenform]:
    r"""Simultaneous eigenvectors.  The first prime splits the space: each
    irreducible factor ``f`` of its characteristic polynomial gives an
    eigenvector with coordinates in ``Q[x]/(f)`` (adjugate column of ``M - x``)."""
    if not basis:
        return []
    d = len(basis)
    mats = {p: hecke_matrix(basis, p) for p in primes}
    p0 = primes[0]
    x = sp.Symbol("x")
    M = mats[p0]
    # F_i|T = sum_j M_ij F_j;  eigenform sum_i c_i F_i with c^T M = lam c^T
    MT = M.T
    charpoly = sp.Poly((MT - x * sp.eye(d)).det(), x)
    _, factors = sp.factor_list(charpoly.as_expr(), x)
    out = []
    for fac, mult in factors:
        f = sp.Poly(fac, x)
        if mult > 1:
            raise ArithmeticError("repeated eigenvalue; add more primes")
        f = sp.Poly(f.monic(), x)
        adj = (MT - x * sp.eye(d)).adjugate()
        vec = None
        for col in range(d):
            cand = [sp.rem(sp.expand(adj[i, col]), f.as_expr(), x) for i in range(d)]
            if any(sp.simplify(c) != 0 for c in cand):
                vec = cand
                break
        if vec is None:
            raise ArithmeticError("no eigenvector found")
        roots = sp.Poly(f, x).nroots(n=30)
        root = complex(roots[0])
        if f.degree() == 1:
            lam = -f.all_coeffs()[1]
            c = [sp.nsimplify(v.subs(x, lam)) for v in vec]
            F = linear_combination([Fraction(int(sp.fraction(ci)[0]), int(sp.fraction(ci)[1])) for ci in c], basis)
            F = F.normalized()
            ev = {}
            for p, Mp in mats.items():
                # eigenvalue from the normalized form
                t0 = F.meta["normalized_at"]
                ev[p] = (Fraction(str(_eigen_from_form(F, p, t0))), None)
            data = HeckeEigenData(F.level, F.weight, ev)
            out.append(Eigenform(F, data, tuple(f.all_coeffs()), vec, root))
        else:
            ev = {}
            data = HeckeEigenData(basis[0].level, basis[0].weight, {}, field_poly=tuple(str(c) for c in f.all_coeffs()))
            for p, Mp in mats.items():
                # lam_p as polynomial in x: (c^T Mp)_j = lam c_j on a nonzero coordinate
                j = next(i for i, v in enumerate(vec) if sp.simplify(v) != 0)
                num = sum(vec[i] * Mp[i, j] for i in range(d))
                lam = _divide_mod(num, vec[j], f, x)
                ev[p] = (str(lam), None)
                data.approx[p] = complex(sp.N(lam.subs(x, roots[0]), 30))
            data.eigenvalues = ev
            out.append(Eigenform(None, data, tuple(f.all_coeffs()), vec, root))
    return out


def _divide_mod(a, b, f, x):
    """``a / b`` in ``Q[x]/(f)``."""
    s, t, g = sp.gcdex(sp.Poly(b, x), sp.Poly(f, x))
    inv = s.as_expr() / g.as_expr()
    return sp.rem(sp.expand(a * inv), f.as_expr(), x)


def _eigen_from_form(F: SiegelExpansion, p: int, t0: Key) -> Fraction:
    return hecke_coefficient(F, p, t0) / F.coeffs[t0][0]


def eigenvalue(F: SiegelExpansion, p: int) -> Fraction:
    """``lambda(p)`` of an eigenform, checked on the whole valid truncation."""
    G = hecke_Tp(F, p)
    t0 = F.first_nonzero_key()
    lam = G.coeffs[t0][0] / F.coeffs[t0][0]
    for t, v in G.coeffs.items():
        if v[0] != lam * F.coeffs.get(t, (Fraction(0),))[0]:
            raise ArithmeticError(f"not an eigenform of T({p}) (witness {t})")
    return lam


def maass_check(F: SiegelExpansion) -> tuple[bool, Key | None]:
    r"""Maass relations ``a(a,b,c) = sum_{d | (a,b,c)} d^{k-1} a(ac/d^2, b/d, 1)``
    on all stored keys; returns a failing key as witness."""
    if F.weight.r != 0:
        raise ValueError("scalar forms only")
    k = F.weight.k
    for t in reduced_keys(F.bound):
        a, b, c = t
        g = content(t)
        rhs = Fraction(0)
        for d in range(1, g + 1):
            if g % d == 0:
                rhs += d ** (k - 1) * F[(a * c // (d * d), b // d, 1)][0]
        if F.coeffs.get(t, (Fraction(0),))[0] != rhs:
            return False, t
    return True, None
