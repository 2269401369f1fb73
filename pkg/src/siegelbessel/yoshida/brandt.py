r"""Brandt matrices (weight 0) and their simultaneous eigenvectors.

``B(n)_{ij} = #{g in I_i conj(I_j) : nrd g = n N_i N_j} / e_j`` counts the
sub-ideals of ``I_i`` of norm ``n N_i`` in the class of ``I_j``; it is
self-adjoint for ``<f, g> = sum_i f_i conj(g_i) / e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp

from .numbers import QuadraticNumber, quadratic_roots
from .quaternion import IdealClassSet, _lll


def theta_counts(G: list[list[int]], X: int) -> np.ndarray:
    r"""``c[m] = #{x : x^t G x = 2m}`` for ``m <= X`` (``G`` even integral).
    Fincke-Pohst over the leading coordinates, last coordinate vectorized."""
    n = len(G)
    U, Gr = _lll(G)
    A = np.array(Gr, dtype=float)
    Q = A.copy()
    for i in range(n):
        for j in range(i + 1, n):
            Q[j, i] = Q[i, j]
            Q[i, j] = Q[i, j] / Q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k, l] -= Q[k, i] * Q[i, l]
    Gi = np.array(Gr, dtype=np.int64)
    counts = np.zeros(X + 1, dtype=np.int64)
    bound = 2 * X
    x = np.zeros(n, dtype=np.int64)

    def rec(i: int, rem: float):
        c = -sum(Q[i, j] * x[j] for j in range(i + 1, n))
        r = (rem + 1e-7) / Q[i, i]
        if r < 0:
            return
        w = r**0.5
        lo, hi = int(np.ceil(c - w - 1e-9)), int(np.floor(c + w + 1e-9))
        if i == 0:
            v = np.arange(lo, hi + 1, dtype=np.int64)
            # x^t G x with x_0 = v
            rest = x.copy()
            rest[0] = 0
            base = int(rest @ Gi @ rest)
            cross = 2 * int(Gi[0] @ rest)
            vals = Gi[0, 0] * v * v + cross * v + base
            vals = vals[(vals <= bound)]
            np.add.at(counts, vals // 2, 1)
            return
        for t in range(lo, hi + 1):
            x[i] = t
            rec(i - 1, rem - Q[i, i] * (t - c) ** 2)
        x[i] = 0

    rec(n - 1, float(bound))
    return counts


@dataclass
class BrandtSystem:
    classes: IdealClassSet
    X: int
    counts: dict = field(default_factory=dict)  # (i, j) -> theta counts of I_i conj(I_j)

    def __post_init__(self):
        h = self.classes.h
        for i in range(h):
            for j in range(i, h):
                _, G = self.classes.hom_lattice(i, j)
                c = theta_counts(G, self.X)
                self.counts[(i, j)] = c
                self.counts[(j, i)] = c

    @property
    def h(self) -> int:
        return self.classes.h

    @property
    def units(self) -> list[int]:
        return self.classes.units

    def matrix(self, n: int) -> list[list[Fraction]]:
        if n > self.X:
            raise ValueError(f"n = {n} beyond the theta bound {self.X}")
        e = self.units
        return [[Fraction(int(self.counts[(i, j)][n]), e[j]) for j in range(self.h)] for i in range(self.h)]

    def inner(self, f, g) -> Fraction:
        r"""``sum_i f_i conj(g_i) / e_i``."""
        return sum((fi * _conj(gi) / ei for fi, gi, ei in zip(f, g, self.units)), Fraction(0))

    def apply(self, n: int, f) -> list:
        M = self.matrix(n)
        return [sum((M[i][j] * f[j] for j in range(self.h)), Fraction(0)) for i in range(self.h)]


def brandt(system: BrandtSystem, n: int) -> list[list[Fraction]]:
    return system.matrix(n)


def _conj(x):
    if isinstance(x, QuadraticNumber) and x.d < 0:
        return x.conjugate()
    return x


@dataclass
class BrandtEigenform:
    weight: int
    vector: list  # values on the ideal classes (Fraction or QuadraticNumber)
    eigenvalues: dict  # prime -> exact eigenvalue
    eisenstein: bool
    field_d: int = 1  # sqrt(d) generates the coefficient field (1 = Q)

    def conjugate(self) -> "BrandtEigenform":
        def c(x):
            return x.conjugate() if isinstance(x, QuadraticNumber) else x

        return BrandtEigenform(self.weight, [c(x) for x in self.vector], {q: c(a) for q, a in self.eigenvalues.items()}, self.eisenstein, self.field_d)

    def ap_numeric(self) -> dict:
        return {q: float(a) for q, a in self.eigenvalues.items()}

    @property
    def atkin_lehner(self) -> int | None:
        """``w_p = -a_p`` for a weight-2 newform of prime level ``p``."""
        return None


def _nullvector(M: list[list]) -> list:
    """A nonzero kernel vector of a singular square matrix over a field."""
    n = len(M)
    A = [list(r) for r in M]
    piv_cols = []
    row = 0
    for c in range(n):
        piv = next((r for r in range(row, n) if A[r][c]), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        pv = A[row][c]
        A[row] = [x / pv for x in A[row]]
        for r in range(n):
            if r != row and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        piv_cols.append(c)
        row += 1
    free = next(c for c in range(n) if c not in piv_cols)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for r, c in enumerate(piv_cols):
        v[c] = -A[r][free]
    return v


def quat_eigenforms(system: BrandtSystem, primes: list[int] | None = None, split_prime: int | None = None) -> list[BrandtEigenform]:
    r"""Simultaneous eigenvectors of the weight-0 Brandt matrices.  The space is
    split by ``B(q0)`` (``q0`` the least prime != p with squarefree
    characteristic polynomial); factors of degree <= 2 are supported."""
    p = system.classes.p
    h = system.h
    if primes is None:
        primes = [int(q) for q in sp.primerange(2, system.X + 1)]
    q0 = split_prime
    x = sp.Symbol("x")
    if q0 is None:
        for q in sp.primerange(2, system.X + 1):
            if q == p:
                continue
            cp = sp.Matrix(system.matrix(int(q))).charpoly(x).as_expr()
            if sp.degree(sp.gcd(cp, sp.diff(cp, x)), x) == 0:
                q0 = int(q)
                break
        if q0 is None:
            raise ArithmeticError("no splitting prime within the theta bound")
    M0 = system.matrix(q0)
    cp = sp.Matrix(M0).charpoly(x).as_expr()
    roots = []
    for fac, _ in sp.factor_list(cp, x)[1]:
        co = sp.Poly(fac, x).monic().all_coeffs()
        co = [Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in co]
        if len(co) == 2:
            roots.append(-co[1])
        elif len(co) == 3:
            roots.extend(quadratic_roots(co[1], co[2]))
        else:
            raise NotImplementedError("Hecke fields of degree > 2")
    out = []
    mats = {q: system.matrix(q) for q in primes}
    for lam in roots:
        A = [[M0[i][j] - (lam if i == j else 0) for j in range(h)] for i in range(h)]
        v = _nullvector(A)
        k0 = next(i for i, y in enumerate(v) if y)
        v = [y / v[k0] for y in v]
        ev = {}
        for q, M in mats.items():
            w = sum((M[k0][j] * v[j] for j in range(h)), Fraction(0))
            ev[q] = w
        eis = all(ev[q] == q + 1 for q in ev if q != p and q <= 7 and sp.isprime(q))
        d = lam.d if isinstance(lam, QuadraticNumber) else 1
        out.append(BrandtEigenform(0, v, ev, eis, d))
    return out
