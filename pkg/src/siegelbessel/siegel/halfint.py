r"""Semi-integral matrices ``T = [[a, b/2], [b/2, c]]`` and the
``GL_2(Z)``-action ``T -> eps T eps^t`` used as coefficient keys."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd, isqrt

Key = tuple[int, int, int]
Mat2 = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True, order=True)
class HalfIntMatrix:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a < 0 or self.c < 0 or 4 * self.a * self.c - self.b * self.b < 0:
            raise ValueError(f"{self.key} is not positive semi-definite")

    @property
    def key(self) -> Key:
        return (self.a, self.b, self.c)

    @property
    def disc(self) -> int:
        """``4 det T``."""
        return 4 * self.a * self.c - self.b * self.b

    @property
    def positive(self) -> bool:
        return self.disc > 0 and self.a > 0


def disc(t: Key) -> int:
    return 4 * t[0] * t[2] - t[1] * t[1]


def content(t: Key) -> int:
    return gcd(gcd(t[0], t[1]), t[2])


def conj_action(eps: Mat2, t: Key) -> Key:
    r"""``eps T eps^t`` in ``(a, b, c)`` coordinates."""
    (p, q), (r, s) = eps
    a, b, c = t
    return (
        a * p * p + b * p * q + c * q * q,
        2 * a * p * r + b * (p * s + q * r) + 2 * c * q * s,
        a * r * r + b * r * s + c * s * s,
    )


def mat_mul(g: Mat2, h: Mat2) -> Mat2:
    return (
        (g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
        (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]),
    )


def det2(g: Mat2) -> int:
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def inv2(g: Mat2) -> Mat2:
    d = det2(g)
    if d not in (1, -1):
        raise ValueError("not unimodular")
    return ((g[1][1] * d, -g[0][1] * d), (-g[1][0] * d, g[0][0] * d))


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gl2z_reduce_T(t: Key) -> tuple[Key, Mat2, bool]:
    r"""Return ``(key, eps, singular)`` with ``t = eps key eps^t`` and ``eps`` in
    ``GL_2(Z)``.

    Positive definite keys satisfy ``0 <= b <= a <= c``.  Singular nonzero
    ``t`` reduce to ``(m, 0, 0)`` with ``m`` the content; ``0`` maps to itself.
    """
    a, b, c = t
    d = 4 * a * c - b * b
    if d < 0 or a < 0 or c < 0:
        raise ValueError(f"{t} is not positive semi-definite")
    if d == 0:
        if a == 0 and c == 0:
            return (0, 0, 0), ((1, 0), (0, 1)), True
        m = content(t)
        # t = m v v^t with v primitive, v = (x, y)
        x2, y2 = a // m, c // m
        x, y = isqrt(x2), isqrt(y2)
        if b < 0:
            y = -y
        g, u1, u2 = _xgcd(x, y)
        # eps e1 = v, eps unimodular: eps = [[x, -u2], [y, u1]]
        eps = ((x, -u2), (y, u1))
        assert conj_action(eps, (m, 0, 0)) == t
        return (m, 0, 0), eps, True
    # SL2 reduction on the Gram matrix: key = g^t t g, so t = g^{-t} key g^{-1}
    g = ((1, 0), (0, 1))
    while True:
        if not (-a < b <= a):
            s = (a - b) // (2 * a)
            b, c = b + 2 * a * s, a * s * s + b * s + c
            g = mat_mul(g, ((1, s), (0, 1)))
            continue
        if a > c:
            a, b, c = c, -b, a
            g = mat_mul(g, ((0, -1), (1, 0)))
            continue
        break
    if b < 0:
        b = -b
        g = mat_mul(g, ((1, 0), (0, -1)))
    gi = inv2(g)
    eps = ((gi[0][0], gi[1][0]), (gi[0][1], gi[1][1]))  # g^{-t}
    return (a, b, c), eps, False


@lru_cache(maxsize=1 << 20)
def reduce_key(t: Key) -> Key:
    return gl2z_reduce_T(t)[0]


def reduced_keys(B: int) -> list[Key]:
    r"""All reduced positive definite keys with ``4 det T <= B``, ordered by
    ``(4 det T, a, b, c)``."""
    out = []
    amax = isqrt(B // 3) + 1
    for a in range(1, amax + 1):
        for b in range(0, a + 1):
            # 4ac - b^2 <= B with c >= a
            cmax = (B + b * b) // (4 * a)
            for c in range(a, cmax + 1):
                if 4 * a * c - b * b <= B:
                    out.append((a, b, c))
    out.sort(key=lambda t: (disc(t), t))
    return out


@lru_cache(maxsize=4096)
def rho_matrix(eps: Mat2, n: int, k: int) -> tuple[tuple[int, ...], ...]:
    r"""Matrix of ``rho(eps) P(X, Y) = det(eps)^k P((X, Y) eps)`` on the basis
    ``X^i Y^{n-i}``, ``i = 0..n``; row index is the output monomial."""
    (p, q), (r, s) = eps
    # X -> p X + r Y,  Y -> q X + s Y
    M = [[0] * (n + 1) for _ in range(n + 1)]
    dk = det2(eps) ** k
    for j in range(n + 1):
        # (pX + rY)^j (qX + sY)^(n-j)
        poly = [0] * (n + 1)
        for u in range(j + 1):
            cu = comb(j, u) * p**u * r ** (j - u)
            for v in range(n - j + 1):
                cv = comb(n - j, v) * q**v * s ** (n - j - v)
                poly[u + v] += cu * cv
        for i in range(n + 1):
            M[i][j] = dk * poly[i]
    return tuple(tuple(row) for row in M)


def apply_rho(eps: Mat2, n: int, k: int, v: tuple) -> tuple:
    if n == 0:
        return (det2(eps) ** k * v[0],)
    M = rho_matrix(eps, n, k)
    return tuple(sum(M[i][j] * v[j] for j in range(n + 1) if v[j]) for i in range(n + 1))
