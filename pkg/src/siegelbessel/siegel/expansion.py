r"""Truncated Fourier expansions of degree-2 Siegel modular forms.

Coefficients live on ``GL_2(Z)``-reduced keys; any other ``T`` is looked up
through ``a(eps T eps^t) = rho(eps) a(T)``.  Vector values are tuples over the
basis ``X^i Y^{n-i}`` of ``C[X, Y]_n``, ``n = 2r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .halfint import Key, apply_rho, disc, gl2z_reduce_T, reduced_keys


@dataclass(frozen=True)
class WeightData:
    k: int
    r: int = 0

    def __post_init__(self):
        if self.k < 0 or self.r < 0:
            raise ValueError("weights must be non-negative")

    @property
    def n(self) -> int:
        return 2 * self.r

    @property
    def kappa(self) -> tuple[int, int]:
        return (self.n + self.k, self.k)


class TruncationError(ValueError):
    pass


@dataclass
class SiegelExpansion:
    """``coeffs`` holds reduced positive definite keys with ``4 det T <= bound``;
    ``singular`` maps content ``m`` to the coefficient at ``diag(m, 0)``
    (``m = 0`` is the constant term).  Missing singular entries are zero only
    if ``cusp`` is set."""

    weight: WeightData
    level: int
    bound: int
    coeffs: dict = field(default_factory=dict)
    singular: dict = field(default_factory=dict)
    singular_bound: int = 0
    cusp: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.weight.n + 1

    def zero_vec(self) -> tuple:
        return (Fraction(0),) * self.dim

    def __getitem__(self, t: Key) -> tuple:
        key, eps, sing = gl2z_reduce_T(t)
        if sing:
            m = key[0]
            if m in self.singular:
                v = self.singular[m]
            elif self.cusp and m > 0:
                return self.zero_vec()
            elif m > self.singular_bound:
                raise TruncationError(f"singular content {m} beyond stored range {self.singular_bound}")
            else:
                v = self.zero_vec()
        else:
            if disc(key) > self.bound:
                raise TruncationError(f"{t}: 4det={disc(key)} > bound {self.bound}")
            v = self.coeffs.get(key)
            if v is None:
                v = self.zero_vec()
        if eps == ((1, 0), (0, 1)):
            return v
        return apply_rho(eps, self.weight.n, self.weight.k, v)

    def scalar(self, t: Key) -> Fraction:
        return self[t][0]

    def keys(self) -> list[Key]:
        return [t for t in reduced_keys(self.bound)]

    def truncate(self, B: int) -> "SiegelExpansion":
        if B > self.bound:
            raise TruncationError("cannot raise bound")
        return SiegelExpansion(
            self.weight,
            self.level,
            B,
            {t: v for t, v in self.coeffs.items() if disc(t) <= B},
            dict(self.singular),
            self.singular_bound,
            self.cusp,
            dict(self.meta),
        )

    def scale(self, s) -> "SiegelExpansion":
        s = Fraction(s) if not isinstance(s, Fraction) else s
        return SiegelExpansion(
            self.weight,
            self.level,
            self.bound,
            {t: tuple(s * x for x in v) for t, v in self.coeffs.items()},
            {m: tuple(s * x for x in v) for m, v in self.singular.items()},
            self.singular_bound,
            self.cusp,
            dict(self.meta),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for v in self.coeffs.values() for x in v) and all(
            x == 0 for v in self.singular.values() for x in v
        )

    def first_nonzero_key(self) -> Key | None:
        for t in reduced_keys(self.bound):
            v = self.coeffs.get(t)
            if v is not None and any(x != 0 for x in v):
                return t
        return None

    def normalized(self) -> "SiegelExpansion":
        """Scaled so that the first nonzero coefficient (reduced keys ordered
        by ``(4 det T, a, b, c)``, first nonzero component) equals 1."""
        t = self.first_nonzero_key()
        if t is None:
            raise ValueError("zero form")
        v = self.coeffs[t]
        x = next(x for x in v if x != 0)
        out = self.scale(1 / Fraction(x))
        out.meta["normalized_at"] = t
        return out


def linear_combination(coeffs: Iterable, forms: list[SiegelExpansion]) -> SiegelExpansion:
    coeffs = [Fraction(c) for c in coeffs]
    w = forms[0].weight
    if any(f.weight != w for f in forms):
        raise ValueError("weight mismatch")
    B = min(f.bound for f in forms)
    SB = min(f.singular_bound if not f.cusp else 10**9 for f in forms)
    out_c: dict = {}
    out_s: dict = {}
    for c, f in zip(coeffs, forms):
        if c == 0:
            continue
        for t, v in f.coeffs.items():
            if disc(t) <= B:
                cur = out_c.get(t)
                out_c[t] = tuple(c * x for x in v) if cur is None else tuple(a + c * x for a, x in zip(cur, v))
        for m, v in f.singular.items():
            cur = out_s.get(m)
            out_s[m] = tuple(c * x for x in v) if cur is None else tuple(a + c * x for a, x in zip(cur, v))
    cusp = all(f.cusp for f, c in zip(forms, coeffs) if c != 0)
    return SiegelExpansion(w, forms[0].level, B, out_c, out_s, 0 if cusp else SB, cusp)


# -- text format ---------------------------------------------------------------


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def dumps(F: SiegelExpansion) -> str:
    """Coefficient file: header ``weight k r level N bound B``, then one line
    ``a b c : v_0 ... v_n`` per reduced key (singular keys included for
    non-cusp forms as ``m 0 0``)."""
    lines = [f"weight {F.weight.k} {F.weight.r} level {F.level} bound {F.bound}"]
    if not F.cusp:
        for m in sorted(F.singular):
            lines.append(f"{m} 0 0 : " + " ".join(_fmt(x) for x in F.singular[m]))
    for t in reduced_keys(F.bound):
        v = F.coeffs.get(t, F.zero_vec())
        lines.append(f"{t[0]} {t[1]} {t[2]} : " + " ".join(_fmt(x) for x in v))
    return "\n".join(lines) + "\n"


def loads(text: str) -> SiegelExpansion:
    it = iter(l for l in text.splitlines() if l.strip())
    head = next(it).split()
    if head[0] != "weight" or head[3] != "level" or head[5] != "bound":
        raise ValueError("bad header")
    k, r, N, B = int(head[1]), int(head[2]), int(head[4]), int(head[6])
    F = SiegelExpansion(WeightData(k, r), N, B)
    sing_seen = False
    for line in it:
        lhs, rhs = line.split(":")
        a, b, c = (int(x) for x in lhs.split())
        v = tuple(Fraction(x) for x in rhs.split())
        if len(v) != 2 * r + 1:
            raise ValueError("vector length mismatch")
        if 4 * a * c - b * b == 0:
            F.singular[a] = v
            sing_seen = True
        else:
            F.coeffs[(a, b, c)] = v
    if sing_seen:
        F.singular_bound = max(F.singular)
    else:
        F.cusp = True
    return F
