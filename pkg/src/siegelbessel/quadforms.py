r"""Binary quadratic forms of negative discriminant and imaginary-quadratic
class groups.

A form ``(a, b, c)`` stands for ``a x^2 + b x y + c y^2`` with discriminant
``b^2 - 4ac = -D``.  Throughout, ``D > 0`` and ``-D`` is a fundamental
discriminant.  Unimodular matrices act on the right:

.. math::  (f\cdot\gamma)(x, y) = f(\alpha x + \beta y, \gamma x + \delta y),

so that the Gram matrices satisfy ``M_{f.g} = g^T M_f g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

Mat2 = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Mat2 = ((1, 0), (0, 1))


def _mat_mul(g: Mat2, h: Mat2) -> Mat2:
    return (
        (g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
        (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]),
    )


def _squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    """True iff ``-D`` is a fundamental discriminant (``D > 0``)."""
    if D <= 0:
        return False
    if D % 4 == 3:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (1, 2) and _squarefree(m)
    return False


def check_discriminant(D: int) -> int:
    if not is_fundamental(D):
        raise ValueError(f"-{D} is not a fundamental negative discriminant")
    return D


@dataclass(frozen=True, order=True)
class BQF:
    """Positive definite primitive binary quadratic form ``a x^2 + b xy + c y^2``."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.b * self.b - 4 * self.a * self.c >= 0 or self.a <= 0:
            raise ValueError(f"{tuple(self)} is not positive definite")

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    @property
    def D(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    @property
    def primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def act(self, g: Mat2) -> "BQF":
        (al, be), (ga, de) = g
        a = self(al, ga)
        c = self(be, de)
        b = 2 * self.a * al * be + self.b * (al * de + be * ga) + 2 * self.c * ga * de
        return BQF(a, b, c)

    def is_reduced(self) -> bool:
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self) -> "BQF":
        return BQF(self.a, -self.b, self.c)


def reduce(f: BQF) -> tuple[BQF, Mat2]:
    r"""Reduce ``f`` and return ``(g, gamma)`` with ``gamma`` in SL2(Z) and
    ``g = f . gamma`` satisfying ``|b| <= a <= c`` and ``b >= 0`` on ties."""
    if not isinstance(f, BQF):
        f = BQF(*f)
    a, b, c = f
    g = IDENTITY
    while True:
        # normalize b into (-a, a]
        if not (-a < b <= a):
            t = (a - b) // (2 * a)
            # x -> x + t y
            b, c = b + 2 * a * t, a * t * t + b * t + c
            g = _mat_mul(g, ((1, t), (0, 1)))
            continue
        if a > c:
            a, b, c = c, -b, a
            g = _mat_mul(g, ((0, -1), (1, 0)))
            continue
        if a == c and b < 0:
            b = -b
            g = _mat_mul(g, ((0, -1), (1, 0)))
        break
    out = BQF(a, b, c)
    assert f.act(g) == out
    return out, g


def principal_form(D: int) -> BQF:
    if D % 4 == 0:
        return BQF(1, 0, D // 4)
    return BQF(1, 1, (D + 1) // 4)


def reduced_forms(D: int) -> list[BQF]:
    """All reduced primitive forms of discriminant ``-D``, principal form first."""
    out = []
    amax = isqrt(D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(BQF(a, b, c))
    out.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f: BQF, g: BQF) -> BQF:
    r"""Gauss composition of two primitive forms of the same discriminant,
    returned reduced (concordant-forms composition, Cohen Alg. 5.4.7)."""
    if f.D != g.D:
        raise ValueError("discriminant mismatch")
    D = f.D
    if f.a > g.a:
        f, g = g, f
    a1, b1, _ = f
    a2, b2, c2 = g
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    num = b3 * b3 + D
    assert num % (4 * a3) == 0
    return reduce(BQF(a3, b3, num // (4 * a3)))[0]


def kronecker(D: int, n: int) -> int:
    r"""Kronecker symbol ``(-D / n)``, the quadratic character of
    ``Q(sqrt(-D))``.  By convention ``kronecker(D, 0) = 0`` unless ``D = 1``."""
    a = -D
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a / n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def wE(D: int) -> int:
    """Number of roots of unity in the imaginary quadratic field of discriminant -D."""
    return 6 if D == 3 else 4 if D == 4 else 2


@dataclass(frozen=True)
class ClassGroup:
    D: int
    reduced: tuple[BQF, ...]
    comp: np.ndarray
    structure: tuple[int, ...]
    generators: tuple[int, ...]
    wE: int
    index: dict = field(repr=False, compare=False)

    @property
    def h(self) -> int:
        return len(self.reduced)

    def index_of(self, f: BQF) -> int:
        return self.index[reduce(f)[0]]

    def inverse(self, i: int) -> int:
        return self.index_of(self.reduced[i].inverse())

    def power(self, i: int, e: int) -> int:
        e %= self.h
        acc = 0
        for _ in range(e):
            acc = int(self.comp[acc, i])
        return acc

    def exponents(self, i: int) -> tuple[int, ...]:
        """Coordinates of class ``i`` on the cyclic generators."""
        return self._dlog[i]

    @property
    def _dlog(self) -> dict:
        return _dlog_table(self)


@lru_cache(maxsize=None)
def _dlog_cache(D: int):
    G = class_group(D)
    table = {}
    for exps in itertools.product(*(range(n) for n in G.structure)):
        x = 0
        for gi, e in zip(G.generators, exps):
            x = int(G.comp[x, G.power(gi, e)])
        table[x] = exps
    if len(table) != G.h:
        raise ArithmeticError("generators do not produce a basis")
    return table


def _dlog_table(G: ClassGroup) -> dict:
    return _dlog_cache(G.D)


def _structure(comp: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Invariant factors and matching generators of the finite abelian group
    given by its multiplication table (identity at index 0)."""
    h = comp.shape[0]
    if h == 1:
        return (), ()

    def pw(i, e):
        acc = 0
        for _ in range(e):
            acc = int(comp[acc, i])
        return acc

    # greedy generating set
    gens: list[int] = []
    sub = {0}
    for x in range(h):
        if x in sub:
            continue
        gens.append(x)
        new = set(sub)
        frontier = list(sub)
        while frontier:
            y = frontier.pop()
            for g in gens:
                z = int(comp[y, g])
                if z not in new:
                    new.add(z)
                    frontier.append(z)
        sub = new
        if len(sub) == h:
            break
    # relation lattice: relative orders in the filtration <g1> < <g1,g2> < ...
    r = len(gens)
    rel_rows = []
    span: dict[int, tuple[int, ...]] = {0: (0,) * r}
    for j, g in enumerate(gens):
        n = 1
        cur = g
        while cur not in span:
            cur = int(comp[cur, g])
            n += 1
        row = [-x for x in span[cur]]
        row[j] += n
        rel_rows.append(row)
        # enlarge span with powers of g
        new_span = dict(span)
        for elt, vec in span.items():
            acc = elt
            for e in range(1, n):
                acc = int(comp[acc, g])
                v = list(vec)
                v[j] += e
                new_span.setdefault(acc, tuple(v))
        span = new_span
    R = Matrix(rel_rows)
    A, U, V = smith_normal_decomp(R)
    Vinv = V.inv()
    invariants, new_gens = [], []
    for i in range(r):
        d = abs(int(A[i, i]))
        if d == 1:
            continue
        x = 0
        for j in range(r):
            x = int(comp[x, pw(gens[j], int(Vinv[i, j]) % h)])
        invariants.append(d)
        new_gens.append(x)
    return tuple(invariants), tuple(new_gens)


@lru_cache(maxsize=None)
def class_group(D: int) -> ClassGroup:
    r"""Class group of the imaginary quadratic field of discriminant ``-D``."""
    check_discriminant(D)
    forms = reduced_forms(D)
    if forms[0] != principal_form(D):
        raise ArithmeticError("principal form missing")
    index = {f: i for i, f in enumerate(forms)}
    h = len(forms)
    comp = np.zeros((h, h), dtype=np.int64)
    for i, f in enumerate(forms):
        for j in range(i, h):
            k = index[compose(f, forms[j])]
            comp[i, j] = comp[j, i] = k
    comp.setflags(write=False)
    structure, gens = _structure(comp)
    return ClassGroup(D, tuple(forms), comp, structure, gens, wE(D), index)


def check_group_axioms(G: ClassGroup, assoc_limit: int = 20) -> None:
    """Raise AssertionError unless ``G.comp`` is an abelian group table."""
    h, comp = G.h, G.comp
    ids = np.arange(h)
    assert np.array_equal(comp[0], ids) and np.array_equal(comp[:, 0], ids)
    assert np.array_equal(comp, comp.T)
    for i in range(h):
        row = comp[i]
        assert len(set(row.tolist())) == h  # latin square: inverses exist, closure
        assert comp[i, G.inverse(i)] == 0
    if h <= assoc_limit:
        triples = itertools.product(range(h), repeat=3)
    else:
        rng = np.random.default_rng(h)
        triples = rng.integers(0, h, size=(2000, 3)).tolist()
    for i, j, k in triples:
        assert comp[comp[i, j], k] == comp[i, comp[j, k]]
    assert int(np.prod(G.structure, dtype=np.int64)) == h


@dataclass(frozen=True)
class ClassCharacter:
    r"""Character of ``Cl_E``; ``angles[i]`` is the value on class ``i`` as a
    fraction of a full turn, i.e. ``Lambda(c_i) = exp(2 pi i angles[i])``."""

    D: int
    index: int
    angles: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        n = 1
        for t in self.angles:
            n = n * t.denominator // gcd(n, t.denominator)
        return n

    @property
    def is_trivial(self) -> bool:
        return all(t == 0 for t in self.angles)

    @property
    def is_real(self) -> bool:
        return all(t.denominator <= 2 for t in self.angles)

    def values(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.array([float(t) for t in self.angles]))

    def conj(self) -> "ClassCharacter":
        return ClassCharacter(self.D, -1, tuple((-t) % 1 for t in self.angles))

    def __call__(self, i: int) -> complex:
        return complex(np.exp(2j * np.pi * float(self.angles[i])))


def characters(G: ClassGroup) -> list[ClassCharacter]:
    r"""All ``h`` characters, indexed by ``m`` in ``prod Z/n_i`` (lexicographic),
    ``chi_m(prod g_i^{e_i}) = exp(2 pi i sum m_i e_i / n_i)``; index 0 is trivial."""
    dlog = _dlog_table(G)
    out = []
    for idx, m in enumerate(itertools.product(*(range(n) for n in G.structure))):
        angles = []
        for i in range(G.h):
            e = dlog[i]
            angles.append(sum(Fraction(mi * ei, ni) for mi, ei, ni in zip(m, e, G.structure)) % 1)
        out.append(ClassCharacter(G.D, idx, tuple(angles)))
    return out


def character_sum_exact(G: ClassGroup, chi: ClassCharacter, psi: ClassCharacter) -> int:
    r"""``sum_c chi(c) conj(psi(c))`` computed exactly: the angles of
    ``chi psi^{-1}`` are equidistributed over ``k/n`` when nontrivial."""
    diff = [(a - b) % 1 for a, b in zip(chi.angles, psi.angles)]
    if all(t == 0 for t in diff):
        return G.h
    # a nontrivial character of order n takes each n-th root of unity equally often
    n = 1
    for t in diff:
        n = n * t.denominator // gcd(n, t.denominator)
    counts = [0] * n
    for t in diff:
        counts[int(t * n)] += 1
    if len(set(counts)) != 1:
        raise ArithmeticError("character sum does not vanish")
    return 0


def character_exponents(G: ClassGroup, X: list[ClassCharacter]) -> tuple[int, np.ndarray]:
    """``(N, A)`` with ``X[m](c_i) = exp(2 pi i A[m, i] / N)``, ``N`` the group exponent."""
    N = G.structure[-1] if G.structure else 1
    A = np.array([[int(t * N) for t in chi.angles] for chi in X], dtype=np.int64).reshape(len(X), G.h)
    return N, A


def orthogonality_matrix(G: ClassGroup, X: list[ClassCharacter]) -> np.ndarray:
    r"""Exact ``sum_c chi(c) conj(psi(c))`` for all pairs, as integers.

    The sum over ``c`` of ``zeta_N^{d_c}`` vanishes exactly when the exponents
    ``d_c`` are equidistributed over the subgroup they generate; that is the
    only way it can vanish for a character, and it is checked rather than
    assumed."""
    N, A = character_exponents(G, X)
    h, n = G.h, len(X)
    d = (A[:, None, :] - A[None, :, :]) % N
    counts = np.zeros((n, n, N), dtype=np.int64)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    for c in range(h):
        np.add.at(counts, (ii, jj, d[:, :, c]), 1)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            cnt = counts[i, j]
            if cnt[0] == h:
                out[i, j] = h
                continue
            g = np.gcd.reduce(np.append(d[i, j], N))
            sub = cnt[::g]
            if cnt.sum() != sub.sum() or np.any(sub != sub[0]):
                raise ArithmeticError("character sum does not vanish")
    return out


def matrix_SE(D: int) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    r"""The matrix ``S_E`` attached to ``E = Q(sqrt(-D))``; ``det S_E = D/4``."""
    check_discriminant(D)
    if D % 4 == 0:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(D, 4)))
    if D % 4 == 3:
        return ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1 + D, 4)))
    raise ValueError("D must be 0 or 3 mod 4")


def bqf_to_matrix(f: BQF) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    a, b, c = f
    return ((Fraction(a), Fraction(b, 2)), (Fraction(b, 2), Fraction(c)))
