r"""Vector- and scalar-valued class-group Bessel periods.

Polynomials in ``C[X, Y]_n`` are coefficient vectors on ``X^i Y^{n-i}``,
``i = 0..n``; ``rho(g) P = det(g)^k P((X, Y) g)``.  Fourier coefficients obey
``a(eps T eps^t) = rho(eps) a(T)``, so the compact torus attached to ``S`` is
``{g in SL_2(R) : g S g^t = S}``, whose invariants in degree ``n = 2r`` are
spanned by ``Q_S^r``, ``Q_S = (X, Y) S (X, Y)^t``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, pi, sqrt

from .quadforms import BQF, ClassCharacter, ClassGroup, matrix_SE
from .siegel.expansion import SiegelExpansion, TruncationError
from .siegel.halfint import apply_rho

Mat = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def pairing_n(P, Q) -> Fraction:
    r"""``(X^i Y^{n-i}, X^j Y^{n-j})_n = (-1)^i C(n, i)`` if ``i + j = n``, else 0."""
    if len(P) != len(Q):
        raise ValueError("degree mismatch")
    n = len(P) - 1
    return sum(((-1) ** i * comb(n, i) * P[i] * Q[n - i] for i in range(n + 1)), Fraction(0))


def invariant_pairing(P, Q) -> Fraction:
    r"""The ``SL_2``-invariant pairing, weights ``(-1)^i / C(n, i)``:
    ``(rho(g) P, rho(g) Q) = det(g)^{n+2k} (P, Q)``."""
    if len(P) != len(Q):
        raise ValueError("degree mismatch")
    n = len(P) - 1
    return sum((Fraction((-1) ** i, comb(n, i)) * P[i] * Q[n - i] for i in range(n + 1)), Fraction(0))


def rho(g, n: int, k: int, P) -> tuple:
    return apply_rho(tuple(tuple(row) for row in g), n, k, tuple(P))


def quadratic_power(S: Mat, r: int) -> tuple[Fraction, ...]:
    r"""Coefficients of ``((X, Y) S (X, Y)^t)^r`` on ``X^i Y^{2r-i}``."""
    (a, b), (_, c) = S
    base = [Fraction(c), 2 * Fraction(b), Fraction(a)]  # Y^2, XY, X^2
    out = [Fraction(1)]
    for _ in range(r):
        nxt = [Fraction(0)] * (len(out) + 2)
        for i, x in enumerate(out):
            if x:
                for j, y in enumerate(base):
                    nxt[i + j] += x * y
        out = nxt
    return tuple(out)


def _det(S: Mat) -> Fraction:
    return Fraction(S[0][0]) * S[1][1] - Fraction(S[0][1]) * S[1][0]


def _disc_of(S: Mat) -> int:
    d4 = 4 * _det(S)
    if d4 <= 0 or S[0][0] <= 0:
        raise ValueError("S must be positive definite")
    if d4.denominator != 1:
        raise ValueError("4 det S must be an integer")
    return int(d4)


@dataclass(frozen=True)
class SqrtScalar:
    """``q * D^{e/2}`` with ``q`` rational."""

    q: Fraction
    D: int
    e: int

    def __float__(self) -> float:
        return float(self.q) * self.D ** (self.e / 2)

    def __mul__(self, other: "SqrtScalar") -> "SqrtScalar":
        if other.D != self.D:
            raise ValueError("different radicands")
        return SqrtScalar(self.q * other.q, self.D, self.e + other.e)

    def __str__(self) -> str:
        return f"{self.q}*{self.D}^({self.e}/2)"


@dataclass(frozen=True)
class QPoly:
    poly: tuple[Fraction, ...]
    prefactor: SqrtScalar

    def numeric(self) -> tuple[float, ...]:
        s = float(self.prefactor)
        return tuple(float(x) * s for x in self.poly)


def q_poly(S: Mat, r: int, k: int) -> QPoly:
    r"""``Q_{S,rho} = ((X, Y) S (X, Y)^t)^r (det S)^{-(2r+k)/2}``; with
    ``det S = D/4`` the prefactor is ``2^{2r+k} D^{-(2r+k)/2}``."""
    D = _disc_of(S)
    m = 2 * r + k
    return QPoly(quadratic_power(S, r), SqrtScalar(Fraction(2) ** m, D, -m))


def torus_generator(S: Mat) -> Mat:
    r"""``A = S J``, ``J = [[0, 1], [-1, 0]]``: ``A S + S A^t = 0`` and
    ``A^2 = -det(S)``, so ``x + y A`` runs over the torus (up to scalars)."""
    (a, b), (_, c) = S
    return ((Fraction(-b), Fraction(a)), (Fraction(-c), Fraction(b)))


@dataclass(frozen=True)
class TorusProjector:
    S: Mat
    n: int
    matrix: tuple[tuple[Fraction, ...], ...]

    def __call__(self, v) -> tuple[Fraction, ...]:
        return tuple(sum((m * x for m, x in zip(row, v)), Fraction(0)) for row in self.matrix)

    def is_idempotent(self) -> bool:
        M = self.matrix
        N = len(M)
        return all(sum(M[i][l] * M[l][j] for l in range(N)) == M[i][j] for i in range(N) for j in range(N))


def torus_projector(S: Mat, n: int) -> TorusProjector:
    r"""Projection onto the weight-0 isotypic component of ``C[X, Y]_n`` under the
    torus of ``S``.  The torus generator has eigenvalues ``+-sqrt(-D)/2``; the
    weight-0 line is spanned by the rational vector ``Q_S^{n/2}`` (none for
    odd ``n``), and the other weights are orthogonal to it for the invariant
    pairing, so the projector is the rational rank-one map
    ``v -> (v, Q)/(Q, Q) Q``."""
    _disc_of(S)
    N = n + 1
    if n % 2:
        return TorusProjector(S, n, tuple(tuple(Fraction(0) for _ in range(N)) for _ in range(N)))
    Q = quadratic_power(S, n // 2)
    qq = invariant_pairing(Q, Q)
    w = [Fraction((-1) ** j, comb(n, j)) * Q[n - j] / qq for j in range(N)]
    return TorusProjector(S, n, tuple(tuple(Q[i] * w[j] for j in range(N)) for i in range(N)))


def _key_of(S) -> tuple[int, int, int]:
    if isinstance(S, BQF):
        return tuple(S)
    (a, b), (_, c) = S
    key = (Fraction(a), 2 * Fraction(b), Fraction(c))
    if any(x.denominator != 1 for x in key):
        raise ValueError("S must be semi-integral")
    return tuple(int(x) for x in key)


def _to_matrix(t) -> Mat:
    a, b, c = t
    return ((Fraction(a), Fraction(b, 2)), (Fraction(b, 2), Fraction(c)))


def _root(angle: Fraction) -> complex:
    return cmath.exp(2j * pi * float(angle))


@dataclass
class BesselReport:
    """``terms`` holds ``B_Lambda`` exactly as ``{angle: vector}`` meaning
    ``sum_angle exp(2 pi i angle) * vector``."""

    D: int
    character: ClassCharacter
    k: int
    r: int
    wE: int
    S: Mat
    reps: dict  # class index -> key (a, b, c)
    per_class: dict  # class index -> a(Phi, S_c)
    terms: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return 2 * self.r

    @property
    def vectorB(self) -> tuple[complex, ...]:
        out = [0j] * (self.n + 1)
        for ang, v in self.terms.items():
            z = _root(ang)
            for i, x in enumerate(v):
                out[i] += z * float(x)
        return tuple(out)

    def scalar_terms(self) -> tuple[dict, SqrtScalar]:
        """``scalarB = prefactor * sum_angle exp(2 pi i angle) * value``."""
        Q = q_poly(self.S, self.r, self.k)
        vals = {ang: pairing_n(v, Q.poly) for ang, v in self.terms.items()}
        return {a: x for a, x in vals.items() if x}, Q.prefactor

    @property
    def scalarB(self) -> complex:
        return bessel_scalar(self)

    def to_json(self) -> dict:
        def c(z):
            return [z.real, z.imag]

        vals, pref = self.scalar_terms()
        return {
            "D": self.D,
            "char": self.character.index,
            "char_angles": [str(a) for a in self.character.angles],
            "weight": [self.k, self.r],
            "wE": self.wE,
            "per_class": {str(self.reps[i]): [str(x) for x in v] for i, v in self.per_class.items()},
            "vectorB": [c(z) for z in self.vectorB],
            "scalarB": c(self.scalarB),
            "scalarB_exact": {"prefactor": str(pref), "terms": {str(a): str(x) for a, x in vals.items()}},
        }


def bessel_vector(Phi: SiegelExpansion, G: ClassGroup, Lam: ClassCharacter, reps: dict | None = None) -> BesselReport:
    r"""``B_Lambda(Phi; E) = w(E)^{-1} pi_rho(sum_c Lambda(c)^{-1} a(Phi, S_c))``.

    Each ``a(Phi, S_c)`` is carried to ``S = S_E`` by a real ``g_c`` in
    ``SL_2`` with ``g_c S g_c^t = S_c`` before projecting.  The projection of
    ``rho(g_c)^{-1} a(S_c)`` equals ``(a(S_c), Q_{S_c}^r)/(Q^r, Q^r) Q_S^r``
    (invariant pairing), which needs no square roots and does not depend on
    the representative ``S_c`` within its ``SL_2(Z)`` class.  For ``r = 0``
    this is the plain weighted sum.  ``reps`` may override the representative
    of any class."""
    D = G.D
    if Lam.D != D or len(Lam.angles) != G.h:
        raise ValueError("character does not belong to this class group")
    if D > Phi.bound:
        raise TruncationError(f"bound {Phi.bound} < D = {D}")
    k, r = Phi.weight.k, Phi.weight.r
    n = 2 * r
    S = matrix_SE(D)
    keys = {i: tuple(f) for i, f in enumerate(G.reduced)}
    if reps:
        for i, t in reps.items():
            t = _key_of(t)
            if 4 * t[0] * t[2] - t[1] * t[1] != D:
                raise ValueError(f"representative {t} has the wrong discriminant")
            keys[i] = t
    per_class = {i: Phi[t] for i, t in keys.items()}
    QS = quadratic_power(S, r)
    qq = invariant_pairing(QS, QS)
    terms: dict = {}
    for i, v in per_class.items():
        if n:
            s = invariant_pairing(v, quadratic_power(_to_matrix(keys[i]), r)) / qq
            vec = tuple(s * x for x in QS)
        else:
            vec = (v[0],)
        ang = (-Lam.angles[i]) % 1
        acc = terms.setdefault(ang, [Fraction(0)] * (n + 1))
        for j, x in enumerate(vec):
            acc[j] += x
    terms = _drop_vanishing_orbits({a: tuple(x / G.wE for x in v) for a, v in terms.items() if any(v)})
    return BesselReport(D, Lam, k, r, G.wE, S, keys, per_class, terms)


def _drop_vanishing_orbits(terms: dict) -> dict:
    """Remove complete cosets ``a + (1/p) Z`` (``p`` prime) carrying one common
    vector: the ``p``-th roots of unity sum to zero."""
    from sympy import primefactors

    changed = True
    while changed:
        changed = False
        N = 1
        for a in terms:
            N = N * a.denominator // gcd(N, a.denominator)
        for p in primefactors(N):
            for a in list(terms):
                if a not in terms:
                    continue
                orbit = [(a + Fraction(j, p)) % 1 for j in range(p)]
                if all(terms.get(b) == terms[a] for b in orbit):
                    for b in orbit:
                        del terms[b]
                    changed = True
    return terms


def bessel_scalar(report: BesselReport) -> complex:
    r"""``(B_Lambda, Q_{S,rho})_{2r}``; for ``r = 0`` this is ``2^k D^{-k/2} B``."""
    vals, pref = report.scalar_terms()
    s = sum((_root(a) * float(x) for a, x in vals.items()), 0j)
    return s * float(pref)


def torus_average_numeric(S: Mat, n: int, k: int = 0, steps: int = 720) -> list[list[float]]:
    """Grid average of ``rho(t)`` over the compact torus of ``S`` (test oracle)."""
    import numpy as np

    A = np.array([[float(x) for x in row] for row in torus_generator(S)])
    s = sqrt(float(_det(S)))
    N = n + 1
    acc = np.zeros((N, N))
    for m in range(steps):
        th = 2 * pi * m / steps
        g = np.cos(th) * np.eye(2) + np.sin(th) / s * A
        M = np.zeros((N, N))
        for j in range(N):
            e = [0.0] * N
            e[j] = 1.0
            M[:, j] = _rho_float(g, n, k, e)
        acc += M
    return (acc / steps).tolist()


def _rho_float(g, n: int, k: int, P) -> list[float]:
    (p, q), (r, s) = g
    det = p * s - q * r
    out = [0.0] * (n + 1)
    for j in range(n + 1):
        if not P[j]:
            continue
        # (pX + rY)^j (qX + sY)^(n-j)
        for u in range(j + 1):
            cu = comb(j, u) * p**u * r ** (j - u)
            for v in range(n - j + 1):
                out[u + v] += P[j] * cu * comb(n - j, v) * q**v * s ** (n - j - v)
    return [det**k * x for x in out]
