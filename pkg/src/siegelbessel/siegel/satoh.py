r"""Satoh's bracket: a ``det^{k+l} Sym^2``-valued form from two scalar forms.

.. math::  a([F, G], T) = \sum_{T_1 + T_2 = T} a_F(T_1) a_G(T_2)\, P_{k T_2 - l T_1}(X, Y),

``P_S(X, Y) = (X, Y) S (X, Y)^t``, ``k, l`` the weights of ``F, G``.  Since
``P_S((X, Y) g) = P_{g S g^t}``, the transformation law for
``rho = det^{k+l} Sym^2`` is inherited termwise.  The normalization gives
``[F, F] = 0`` and ``[G, F] = -[F, G]``.
"""

from __future__ import annotations

from fractions import Fraction

from .expansion import SiegelExpansion, WeightData
from .halfint import Key, reduced_keys
from .ring import _ScalarView, splits


def sym2_vector(t: Key) -> tuple:
    """Coefficients of ``P_T = a X^2 + b XY + c Y^2`` on ``(Y^2, XY, X^2)``."""
    a, b, c = t
    return (c, b, a)


def satoh_bracket(F: SiegelExpansion, G: SiegelExpansion, B: int | None = None) -> SiegelExpansion:
    if F.weight.r or G.weight.r:
        raise ValueError("scalar inputs required")
    k, l = F.weight.k, G.weight.k
    Bout = min(F.bound, G.bound) if B is None else B
    fv, gv = _ScalarView(F), _ScalarView(G)
    den = Fraction(1, fv.den * gv.den)

    def coeff(t: Key) -> tuple:
        a, b, c = t
        s0 = s1 = s2 = 0
        for t1 in splits(t):
            x = fv(t1)
            if not x:
                continue
            t2 = (a - t1[0], b - t1[1], c - t1[2])
            y = gv(t2)
            if not y:
                continue
            xy = x * y
            # k T2 - l T1
            s0 += xy * (k * t2[2] - l * t1[2])
            s1 += xy * (k * t2[1] - l * t1[1])
            s2 += xy * (k * t2[0] - l * t1[0])
        return (s0 * den, s1 * den, s2 * den)

    coeffs = {t: coeff(t) for t in reduced_keys(Bout)}
    sing = {}
    SB = 0
    if not (F.cusp or G.cusp):
        SB = min(F.singular_bound, G.singular_bound)
        for m in range(SB + 1):
            sing[m] = coeff((m, 0, 0))
    cusp = all(x == 0 for v in sing.values() for x in v)
    out = SiegelExpansion(
        WeightData(k + l, 1),
        F.level,
        Bout,
        coeffs,
        {} if cusp else sing,
        0 if cusp else SB,
        cusp,
        {"name": f"[{F.meta.get('name', '?')},{G.meta.get('name', '?')}]"},
    )
    return out
