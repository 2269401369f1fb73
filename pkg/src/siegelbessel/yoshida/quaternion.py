r"""The definite quaternion algebra ramified at ``{p, infinity}``, a maximal
order, its right ideal classes and unit orders.

Elements are 4-tuples ``(x0, x1, x2, x3) = x0 + x1 i + x2 j + x3 k`` with
``i^2 = a``, ``j^2 = b``, ``k = ij = -ji``.  Lattices are kept as integer row
matrices of coordinates in the basis of the maximal order ``O``; every lattice
handled here (ideals, products ``I conj(J)``) lies inside ``O``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

import numpy as np
from flint import fmpz_mat

from ..quadforms import kronecker

Elt = tuple[Fraction, Fraction, Fraction, Fraction]


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int

    def mul(self, x: Elt, y: Elt) -> Elt:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x: Elt) -> Elt:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Elt) -> Fraction:
        return x[0] * x[0] - self.a * x[1] * x[1] - self.b * x[2] * x[2] + self.a * self.b * x[3] * x[3]

    @staticmethod
    def trd(x: Elt) -> Fraction:
        return 2 * x[0]


def _elt(*xs) -> Elt:
    return tuple(Fraction(x) for x in xs)


def _aux_prime(p: int) -> tuple[int, int]:
    """``q = 3 mod 4`` prime with ``(p/q) = -1`` and ``c`` with ``q | c^2 p + 1``."""
    q = 3
    while True:
        if _is_prime(q) and q % 4 == 3 and kronecker(q, p) == -1 and pow(p, (q - 1) // 2, q) == q - 1:
            for c in range(q):
                if (c * c * p + 1) % q == 0:
                    return q, c
        q += 4


def maximal_order_data(p: int) -> tuple[QuaternionAlgebra, list[Elt]]:
    r"""A maximal order of the algebra ramified at ``{p, infinity}`` (standard
    models by ``p`` mod 8)."""
    if p == 2 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    h = Fraction(1, 2)
    if p % 4 == 3:
        A = QuaternionAlgebra(-1, -p)
        basis = [_elt(1, 0, 0, 0), _elt(0, 1, 0, 0), _elt(h, 0, h, 0), _elt(0, h, 0, h)]
    elif p % 8 == 5:
        A = QuaternionAlgebra(-2, -p)
        basis = [_elt(h, 0, h, h), _elt(0, Fraction(1, 4), h, Fraction(1, 4)), _elt(0, 0, 1, 0), _elt(0, 0, 0, 1)]
    else:
        q, c = _aux_prime(p)
        A = QuaternionAlgebra(-p, -q)
        basis = [_elt(h, 0, h, 0), _elt(0, h, 0, h), _elt(0, 0, Fraction(1, q), Fraction(c, q)), _elt(0, 0, 0, 1)]
    return A, basis


def _hnf_rows(rows: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    H = fmpz_mat(rows).hnf()
    out = [tuple(int(x) for x in r) for r in H.tolist() if any(r)]
    return tuple(out)


def _det4(rows) -> int:
    return int(fmpz_mat([list(r) for r in rows]).det())


@dataclass(frozen=True)
class Lattice:
    """Rank-4 sublattice of ``O`` (HNF rows of ``O``-coordinates) with its reduced norm."""

    rows: tuple[tuple[int, ...], ...]
    norm: Fraction

    @property
    def index(self) -> int:
        return abs(_det4(self.rows))


class QuaternionOrder:
    """Maximal order ``O`` with arithmetic on ``O``-coordinates."""

    def __init__(self, p: int):
        self.p = p
        self.algebra, self.basis = maximal_order_data(p)
        B = np.array([[x for x in e] for e in self.basis], dtype=object)
        self._B = [[Fraction(x) for x in row] for row in B]
        self._Binv = _inv4(self._B)
        # structure constants: basis_i * basis_j in O-coordinates
        self.mult = [[self.coords(self.algebra.mul(ei, ej)) for ej in self.basis] for ei in self.basis]
        self.conj_mat = [self.coords(self.algebra.conj(e)) for e in self.basis]
        self.nrd_gram = [[self.algebra.trd(self.algebra.mul(ei, self.algebra.conj(ej))) for ej in self.basis] for ei in self.basis]
        for row in self.mult:
            for c in row:
                if any(x.denominator != 1 for x in c):
                    raise ArithmeticError("basis is not closed under multiplication")
        self.discriminant = abs(_det_frac([[Fraction(x) for x in r] for r in self.nrd_gram]))
        if self.discriminant != p * p:
            raise ArithmeticError(f"order is not maximal: discriminant {self.discriminant}")

    def coords(self, x: Elt) -> tuple[Fraction, ...]:
        return tuple(sum((x[j] * self._Binv[j][i] for j in range(4)), Fraction(0)) for i in range(4))

    def element(self, c) -> Elt:
        return tuple(sum((Fraction(c[i]) * self._B[i][j] for i in range(4)), Fraction(0)) for j in range(4))

    def mul_coords(self, u, v) -> tuple:
        out = [0, 0, 0, 0]
        for i in range(4):
            if u[i]:
                for j in range(4):
                    if v[j]:
                        s = u[i] * v[j]
                        m = self.mult[i][j]
                        for l in range(4):
                            out[l] += s * m[l]
        return tuple(out)

    def conj_coords(self, u) -> tuple:
        out = [0, 0, 0, 0]
        for i in range(4):
            if u[i]:
                for l in range(4):
                    out[l] += u[i] * self.conj_mat[i][l]
        return tuple(out)

    def nrd_coords(self, u) -> Fraction:
        return Fraction(sum(u[i] * u[j] * self.nrd_gram[i][j] for i in range(4) for j in range(4)), 2)

    def trd_coords(self, u) -> Fraction:
        return self.algebra.trd(self.element(u))

    # lattices

    def unit_lattice(self) -> Lattice:
        return Lattice(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)), Fraction(1))

    def span(self, gens, norm: Fraction) -> Lattice:
        rows = []
        for g in gens:
            if any(Fraction(x).denominator != 1 for x in g):
                raise ArithmeticError("generator outside O")
            rows.append([int(x) for x in g])
        H = _hnf_rows(rows)
        if len(H) != 4:
            raise ArithmeticError("generators do not span a rank-4 lattice")
        return Lattice(H, Fraction(norm))

    def right_ideal(self, gens, norm) -> Lattice:
        """``sum g O`` for the given generators."""
        prods = [self.mul_coords(g, e) for g in gens for e in _unit_vectors()]
        return self.span(prods, norm)

    def product_conj(self, I: Lattice, J: Lattice) -> Lattice:
        """``I conj(J)``; reduced norm ``N(I) N(J)``."""
        prods = [self.mul_coords(x, self.conj_coords(y)) for x in I.rows for y in J.rows]
        return self.span(prods, I.norm * J.norm)

    def gram(self, L: Lattice, scale: Fraction = Fraction(1)) -> list[list[Fraction]]:
        """Gram matrix of ``trd(x conj y) / scale`` on the rows of ``L``."""
        G = self.nrd_gram
        out = []
        for u in L.rows:
            row = []
            for v in L.rows:
                row.append(Fraction(sum(u[i] * v[j] * G[i][j] for i in range(4) for j in range(4))) / scale)
            out.append(row)
        return out


def _unit_vectors():
    return [tuple(int(i == j) for j in range(4)) for i in range(4)]


def _det_frac(M) -> Fraction:
    M = [list(r) for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            for k in range(c, n):
                M[r][k] -= f * M[c][k]
    return det


def _inv4(M) -> list[list[Fraction]]:
    n = len(M)
    A = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [r[n:] for r in A]


# ---------------------------------------------------------------------------
# short vectors


def _lll(G: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """LLL-reduce an integral positive definite Gram matrix; returns ``(U, G')``
    with ``G' = U G U^t``."""
    n = len(G)
    # reduce via a basis realization: LLL on Gram is available through fmpz_mat.lll(gram=True)
    M = fmpz_mat(G)
    try:
        Gr, U = M.lll(transform=True, rep="gram")
    except TypeError:  # pragma: no cover - older flint
        return [[int(i == j) for j in range(n)] for i in range(n)], G
    U = [[int(x) for x in r] for r in U.tolist()]
    Gr = [[int(x) for x in r] for r in Gr.tolist()]
    return U, Gr


def short_vectors(G: list[list[int]], bound: int):
    r"""All integer ``x`` with ``x^t G x <= bound`` (``G`` integral, positive
    definite), grouped as ``{value: [x, ...]}``.  Fincke-Pohst on the LLL-reduced
    Gram matrix; candidates are re-checked exactly."""
    n = len(G)
    U, Gr = _lll(G)
    A = np.array(Gr, dtype=float)
    # q_ii and q_ij of the completed-square form
    Q = A.copy()
    for i in range(n):
        for j in range(i + 1, n):
            Q[j, i] = Q[i, j]
            Q[i, j] = Q[i, j] / Q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k, l] -= Q[k, i] * Q[i, l]
    q = [[Q[i, j] for j in range(n)] for i in range(n)]
    Gi = np.array(Gr, dtype=np.int64)
    Ui = np.array(U, dtype=np.int64)
    out: dict[int, list] = {}
    x = [0] * n
    eps = 1e-9 * max(1, bound)

    def rec(i: int, rem: float):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = (rem + eps) / q[i][i]
        if r < 0:
            return
        w = r**0.5
        lo, hi = int(np.ceil(c - w - 1e-12)), int(np.floor(c + w + 1e-12))
        for v in range(lo, hi + 1):
            x[i] = v
            t = rem - q[i][i] * (v - c) ** 2
            if i == 0:
                xv = np.array(x, dtype=np.int64)
                val = int(xv @ Gi @ xv)
                if val <= bound:
                    out.setdefault(val, []).append(tuple(int(y) for y in xv @ Ui))
            else:
                rec(i - 1, t)
        x[i] = 0

    rec(n - 1, float(bound))
    return out


# ---------------------------------------------------------------------------
# ideal classes


@dataclass
class IdealClassSet:
    order: QuaternionOrder
    ideals: list  # right ideals (Lattice), ideals[0] = O
    units: list  # e_i = |O_l(I_i)^x|

    @property
    def p(self) -> int:
        return self.order.p

    @property
    def h(self) -> int:
        return len(self.ideals)

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, e) for e in self.units), Fraction(0))

    @cached_property
    def _pair_cache(self) -> dict:
        return {}

    def hom_lattice(self, i: int, j: int) -> tuple[Lattice, list[list[int]]]:
        r"""``L_ij = I_i conj(I_j)`` with the integral Gram matrix of
        ``trd(x conj y) / (N_i N_j)`` (so ``x^t G x = 2 nrd(x) / (N_i N_j)``)."""
        key = (i, j)
        if key not in self._pair_cache:
            O = self.order
            L = O.product_conj(self.ideals[i], self.ideals[j])
            G = O.gram(L, L.norm)
            if any(x.denominator != 1 for r in G for x in r):
                raise ArithmeticError("non-integral hom lattice")
            self._pair_cache[key] = (L, [[int(x) for x in r] for r in G])
        return self._pair_cache[key]

    def class_of(self, J: Lattice) -> int:
        for i, I in enumerate(self.ideals):
            if is_equivalent(self.order, I, J):
                return i
        raise ArithmeticError("ideal not equivalent to any stored class")


def count_norm(O: QuaternionOrder, L: Lattice, value: Fraction) -> int:
    """Number of ``x`` in ``L`` with ``nrd(x) = value``."""
    G = O.gram(L)
    den = 1
    for r in G:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    Gi = [[int(x * den) for x in r] for r in G]
    target = 2 * value * den
    if target.denominator != 1:
        return 0
    sv = short_vectors(Gi, int(target))
    return len(sv.get(int(target), []))


def is_equivalent(O: QuaternionOrder, I: Lattice, J: Lattice) -> bool:
    r"""``I ~ J`` (``J = alpha I``) iff ``J conj(I)`` has an element of reduced
    norm ``N(I) N(J)``."""
    return count_norm(O, O.product_conj(J, I), I.norm * J.norm) > 0


def unit_count(O: QuaternionOrder, I: Lattice) -> int:
    r"""``|O_l(I)^x| = #{g in I conj(I) : nrd g = N(I)^2}``."""
    return count_norm(O, O.product_conj(I, I), I.norm * I.norm)


def _residues(L: Lattice, ell: int):
    import itertools

    for cs in itertools.product(range(ell), repeat=4):
        if any(cs):
            yield tuple(sum(c * r[i] for c, r in zip(cs, L.rows)) for i in range(4))


def neighbours(O: QuaternionOrder, I: Lattice, ell: int) -> list[Lattice]:
    r"""The ``ell + 1`` right ideals ``J`` of ``O`` with ``ell I subset J subset I``,
    ``[I : J] = ell^2``: ``J = x O + ell I`` with ``nrd(x)/N(I) = 0 mod ell``."""
    out = []
    seen = set()
    base = [tuple(ell * c for c in r) for r in I.rows]
    for x in _residues(I, ell):
        if (O.nrd_coords(x) / I.norm) % ell:
            continue
        gens = [O.mul_coords(x, e) for e in _unit_vectors()] + base
        J = O.span(gens, I.norm * ell)
        if J.index != I.index * ell * ell or J.rows in seen:
            continue
        seen.add(J.rows)
        out.append(J)
    return out


def ideal_classes(p: int) -> IdealClassSet:
    r"""Right ideal classes by breadth-first ``ell``-neighbour search from ``O``
    (``ell`` the least prime != p); stops when the Eichler mass
    ``sum 1/e_i = (p - 1)/24`` is reached and raises if it is overshot."""
    O = QuaternionOrder(p)
    ell = 2 if p != 2 else 3
    target = Fraction(p - 1, 24)
    I0 = O.unit_lattice()
    ideals, units = [I0], [unit_count(O, I0)]
    frontier = [I0]
    while sum(Fraction(1, e) for e in units) < target:
        if not frontier:
            raise ArithmeticError("neighbour search exhausted below the mass")
        nxt = []
        for I in frontier:
            for J in neighbours(O, I, ell):
                if any(is_equivalent(O, K, J) for K in ideals):
                    continue
                ideals.append(J)
                units.append(unit_count(O, J))
                nxt.append(J)
        frontier = nxt
    S = IdealClassSet(O, ideals, units)
    if S.mass != target:
        raise ArithmeticError(f"mass {S.mass} != {target}")
    return S
