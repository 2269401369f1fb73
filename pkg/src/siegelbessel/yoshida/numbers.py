"""Exact arithmetic in ``Q(sqrt(d))``."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def squarefree_part(n: int) -> tuple[int, int]:
    """``n = s^2 d`` with ``d`` squarefree (sign kept in ``d``)."""
    sgn = -1 if n < 0 else 1
    n = abs(n)
    s, d = 1, 1
    m, f = n, 2
    while f * f <= m:
        e = 0
        while m % f == 0:
            m //= f
            e += 1
        s *= f ** (e // 2)
        d *= f ** (e % 2)
        f += 1
    d *= m
    return s, sgn * d


class QuadraticNumber:
    """``a + b sqrt(d)`` with rational ``a, b``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 5):
        self.a, self.b, self.d = Fraction(a), Fraction(b), d

    def _coerce(self, o):
        if isinstance(o, QuadraticNumber):
            if o.d != self.d and o.b and self.b:
                raise ValueError("different quadratic fields")
            return o
        if isinstance(o, (int, Fraction)):
            return QuadraticNumber(o, 0, self.d)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d if self.b else o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        d = self.d if self.b else o.d
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        return self * o.conjugate() * QuadraticNumber(Fraction(1) / n, 0, self.d)

    def __rtruediv__(self, o):
        return QuadraticNumber(o, 0, self.d) / self

    def __pow__(self, e: int):
        out = QuadraticNumber(1, 0, self.d)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if isinstance(o, QuadraticNumber):
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __complex__(self):
        return complex(float(self.a)) + float(self.b) * (complex(self.d) ** 0.5)

    def __float__(self):
        if self.d < 0 and self.b:
            raise TypeError("not real")
        return float(self.a) + float(self.b) * self.d**0.5

    def embed(self, sign: int = 1) -> complex:
        """Image under ``sqrt(d) -> sign * sqrt(d)``."""
        return complex(float(self.a)) + sign * float(self.b) * (complex(self.d) ** 0.5)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if not self.b:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def quadratic_roots(u: Fraction, v: Fraction) -> list:
    """Roots of ``x^2 + u x + v``: rationals or a conjugate pair in ``Q(sqrt d)``."""
    disc = Fraction(u) ** 2 - 4 * Fraction(v)
    num, den = disc.numerator, disc.denominator
    s, d = squarefree_part(num * den)
    # sqrt(disc) = s sqrt(d) / den
    if d == 1:
        r = Fraction(s, den)
        return [(-u + r) / 2, (-u - r) / 2]
    return [QuadraticNumber(-Fraction(u) / 2, Fraction(s, 2 * den), d), QuadraticNumber(-Fraction(u) / 2, -Fraction(s, 2 * den), d)]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
