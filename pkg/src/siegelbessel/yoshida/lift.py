r"""Scalar Yoshida lifts of weight-0 quaternionic eigenforms, toric periods
and the combined Bessel-period identity.

The classical lift of ``(f_1, f_2)`` is the theta pairing

    theta*(Z) = sum_{i, j} f_1(i) f_2(j) / (e_i e_j) sum_{x, y in L_ij} e(tr(T(x, y) Z))

with ``L_ij = I_i conj(I_j)``, ``q(x) = nrd(x)/(N_i N_j)`` and
``T(x, y) = [[q(x), b/2], [b/2, q(y)]]``, ``b = trd(x conj y)/(N_i N_j)``.
It is a Siegel cusp form of weight 2 on ``Gamma_0(p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..bessel import BesselReport, bessel_scalar, bessel_vector
from ..lfun.builders import gl2_adjoint, gl2_rankin, gl2_times_ai
from ..lfun.series import completed_value
from ..quadforms import ClassCharacter, characters, class_group, kronecker, reduced_forms
from ..siegel.expansion import SiegelExpansion, WeightData
from ..siegel.halfint import Key, disc, reduced_keys
from .brandt import BrandtEigenform, BrandtSystem, quat_eigenforms
from .numbers import QuadraticNumber
from .quaternion import IdealClassSet, ideal_classes, short_vectors


def embed(x, sign: int = 1) -> complex:
    """Complex image of an exact Hecke-field element (``sqrt d -> sign sqrt d``)."""
    if isinstance(x, QuadraticNumber):
        return x.embed(sign)
    return complex(x)


@dataclass
class YoshidaInstance:
    p: int
    classes: IdealClassSet
    f1: BrandtEigenform
    f2: BrandtEigenform
    D: int
    char: int = 0
    k1: int = 0
    k2: int = 0

    def __post_init__(self):
        p = self.p
        if p == 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError("p must be an odd prime")
        if self.k1 < self.k2 or self.k2 < 0:
            raise ValueError("weights must satisfy k1 >= k2 >= 0")
        if self.k1 or self.k2:
            raise NotImplementedError("harmonic weights k_i > 0 are not implemented")
        if self.f1.eisenstein or self.f2.eisenstein:
            raise ValueError("both forms must be cuspidal")
        if self.f1.vector == self.f2.vector:
            raise ValueError("the two forms must be distinct")
        if self.f1.eigenvalues[p] != self.f2.eigenvalues[p]:
            raise ValueError("Atkin-Lehner signs at p differ")
        if kronecker(self.D, p) != -1:
            raise ValueError(f"p = {p} is not inert in Q(sqrt(-{self.D}))")

    @property
    def atkin_lehner(self) -> int:
        return -int(round(float(self.f1.eigenvalues[self.p])))

    @property
    def Lam(self) -> ClassCharacter:
        return characters(class_group(self.D))[self.char]


# ---------------------------------------------------------------------------
# the theta pairing


class YoshidaLift:
    """Fourier coefficients of ``theta*`` for an instance, computed on demand."""

    def __init__(self, inst: YoshidaInstance, cmax: int = 8):
        self.inst = inst
        S = inst.classes
        self.weights = {}
        for i in range(S.h):
            for j in range(S.h):
                w = inst.f1.vector[i] * inst.f2.vector[j] * Fraction(1, S.units[i] * S.units[j])
                if w:
                    self.weights[(i, j)] = w
        self.cmax = 0
        self._vecs: dict = {}
        self._grams: dict = {}
        self._extend(cmax)

    def _extend(self, cmax: int):
        S = self.inst.classes
        for key in self.weights:
            _, G = S.hom_lattice(*key)
            sv = short_vectors(G, 2 * cmax)
            self._grams[key] = np.array(G, dtype=np.int64)
            self._vecs[key] = {v // 2: np.array(xs, dtype=np.int64) for v, xs in sv.items()}
        self.cmax = cmax

    def representation_number(self, key, t: Key) -> int:
        a, b, c = t
        V = self._vecs[key]
        if a not in V or c not in V:
            return 0
        X, Y = V[a], V[c]
        return int(np.count_nonzero((X @ self._grams[key] @ Y.T) == b))

    def coefficient(self, t: Key):
        a, b, c = t
        if max(a, c) > self.cmax:
            self._extend(max(a, c))
        out = Fraction(0)
        for key, w in self.weights.items():
            r = self.representation_number(key, t)
            if r:
                out = out + w * r
        return out


def yoshida_coeffs(inst: YoshidaInstance, B: int) -> SiegelExpansion:
    r"""Expansion of ``theta*`` on reduced keys with ``4 det T <= B``.
    Singular coefficients are ``<f_1, B(m) f_2> = 0``; they are computed and
    checked, not assumed."""
    keys = list(reduced_keys(B))
    cmax = max(t[2] for t in keys)
    Y = YoshidaLift(inst, cmax)
    coeffs = {t: (Y.coefficient(t),) for t in keys}
    for m in range(0, 4):
        if Y.coefficient((m, 0, 0)) if m else 0:
            raise ArithmeticError("Yoshida lift has a nonzero singular coefficient")
    return SiegelExpansion(WeightData(2, 0), inst.p, B, coeffs, {}, 0, True, {"yoshida": (inst.p, inst.D)})


def lift_eigenvalue(Y: YoshidaLift, q: int, t0: Key = (1, 1, 1)) -> object:
    r"""``lambda(q)`` from ``a(t0; theta* | T(q)) / a(t0)`` (weight 2, ``q`` prime to ``p``)."""
    from ..siegel.hecke import _gram, _sublattices

    a, b, c = t0
    s = Y.coefficient(_reduce(q * a, q * b, q * c))
    for U in _sublattices(q):
        A, Bq, C = _gram(U, t0)
        if A % q == 0 and Bq % q == 0 and C % q == 0:
            s = s + Y.coefficient(_reduce(A // q, Bq // q, C // q))
    if a % q == 0 and b % q == 0 and c % q == 0:
        s = s + q * Y.coefficient(_reduce(a // q, b // q, c // q))
    return s / Y.coefficient(t0)


def _reduce(a, b, c) -> Key:
    from ..siegel.halfint import reduce_key

    return reduce_key((a, b, c))


def spinor_check(inst: YoshidaInstance, q: int, t0: Key = (1, 1, 1)) -> dict:
    r"""``lambda(q) = a_q(f_1) + a_q(f_2)`` and the ``q^2`` eigenvalue through
    ``lambda(q^2) = a(q^2 t0)/a(t0) + (1 + chi(q)) (lambda(q) - 1)``, which must
    equal ``lambda(q)^2 - 1 - 2q - a_q(f_1) a_q(f_2)`` (factorization of the
    spinor factor into the two elliptic factors)."""
    Y = YoshidaLift(inst, 8)
    lam = lift_eigenvalue(Y, q, t0)
    a1, a2 = inst.f1.eigenvalues[q], inst.f2.eigenvalues[q]
    chi = kronecker(disc(t0), q)
    lam2 = Y.coefficient(_reduce(q * q * t0[0], q * q * t0[1], q * q * t0[2])) / Y.coefficient(t0) + (1 + chi) * (lam - 1)
    return {"q": q, "lambda_q": lam, "a1+a2": a1 + a2, "lambda_q2": lam2, "predicted_q2": lam * lam - 1 - 2 * q - a1 * a2}


# ---------------------------------------------------------------------------
# toric periods


def _order_generator(D: int) -> tuple[int, int]:
    """``(trace, norm)`` of ``omega`` with ``O_E = Z[omega]``."""
    return (1, (1 + D) // 4) if D % 4 == 3 else (0, D // 4)


@dataclass
class OptimalEmbedding:
    D: int
    cls: int  # class whose left order contains phi(O_E)
    gamma: tuple  # phi(omega) = gamma / N(I_cls), O-coordinates


def optimal_embedding(S: IdealClassSet, D: int) -> OptimalEmbedding:
    r"""An embedding ``phi : O_E -> O_l(I_i)`` for the first class ``i`` admitting one.
    ``O_l(I) = I conj(I) / N(I)``; ``phi(omega) = gamma/N`` with ``gamma`` in
    ``I conj(I)`` of reduced norm ``nrd(omega) N^2`` and trace ``trd(omega) N``.
    For ``p`` inert in ``E`` every such embedding is optimal (``O_E`` is maximal)."""
    t, n = _order_generator(D)
    O = S.order
    for i in range(S.h):
        L, G = S.hom_lattice(i, i)
        N = S.ideals[i].norm
        sv = short_vectors(G, 2 * n)
        for x in sv.get(2 * n, []):
            g = tuple(sum(c * r[l] for c, r in zip(x, L.rows)) for l in range(4))
            if O.trd_coords(g) == t * N:
                return OptimalEmbedding(D, i, g)
    raise ArithmeticError(f"no optimal embedding of the order of discriminant -{D}")


def torus_points(S: IdealClassSet, D: int) -> tuple[list[int], OptimalEmbedding]:
    r"""Classes of ``phi(a_c) I`` for the reduced forms ``(a, b, c)`` of
    discriminant ``-D``, ``a_c = a Z + ((-b + sqrt(-D))/2) Z``."""
    emb = optimal_embedding(S, D)
    O = S.order
    I = S.ideals[emb.cls]
    N = I.norm
    t, _ = _order_generator(D)
    out = []
    for f in reduced_forms(D):
        a, b, _c = f
        s = (-b - t) // 2  # (-b + sqrt(-D))/2 = s + omega
        gens = []
        for y in I.rows:
            gens.append(tuple(a * v for v in y))
            uy = O.mul_coords(emb.gamma, y)
            gens.append(tuple(s * v + Fraction(w) / N for v, w in zip(y, uy)))
        J = O.span(gens, N * a)
        if J.index != I.index * a * a:
            raise ArithmeticError("torus translate has the wrong index")
        out.append(S.class_of(J))
    return out, emb


def toric_period(f: BrandtEigenform, S: IdealClassSet, D: int, Lam: ClassCharacter, sign: int = 1,
                 measure: str = "product") -> complex:
    r"""``P(f, Lambda) = vol_c sum_c Lambda(c) f(phi(a_c) x_0)``.

    ``measure="product"``: local self-dual measures on ``E_v^x / Q_v^x`` and
    ``vol(R^x \ C^x) = 1``, so each class has volume ``2/(w_E sqrt(D))``.
    ``measure="tamagawa"``: total volume 2, i.e. ``2/h_E`` per class."""
    pts, _ = torus_points(S, D)
    h = len(pts)
    if measure == "product":
        vol = 2 / (class_group(D).wE * math.sqrt(D))
    elif measure == "tamagawa":
        vol = 2 / h
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return vol * sum(Lam(c) * embed(f.vector[x], sign) for c, x in enumerate(pts))


def quaternionic_norm(f: BrandtEigenform, S: IdealClassSet, sign: int = 1) -> float:
    r"""``<f, f> = sum_a |f(a)|^2 / #Gamma_a`` with ``#Gamma_a = e_a / 2``."""
    return sum(abs(embed(x, sign)) ** 2 * 2 / e for x, e in zip(f.vector, S.units))


# ---------------------------------------------------------------------------
# L-values


def _ap(f: BrandtEigenform, sign: int) -> dict:
    return {q: embed(a, sign).real for q, a in f.eigenvalues.items()}


@dataclass
class LData:
    central: float  # finite L(1/2, pi x AI(Lambda))
    adjoint: float  # finite L(1, pi, Ad)
    gamma_central: float  # archimedean factor of the central value
    gamma_adjoint: float
    errors: tuple

    def ratio(self, completed: bool) -> float:
        r = self.central / self.adjoint
        return r * self.gamma_central / self.gamma_adjoint if completed else r


def l_data(f: BrandtEigenform, p: int, D: int, Lam: ClassCharacter, sign: int = 1) -> LData:
    ap = _ap(f, sign)
    G = class_group(D)
    Lc = completed_value(gl2_times_ai(ap, 2, p, G, Lam), 0.5)
    La = completed_value(gl2_adjoint(ap, 2, p), 1.0)
    return LData(Lc.value.real, La.value.real, math.exp(Lc.log_gamma_factor.real), math.exp(La.log_gamma_factor.real),
                 (Lc.error, La.error))


def rankin_at_one(f1: BrandtEigenform, f2: BrandtEigenform, p: int, sign: int = 1, delta: float = 1e-4) -> float:
    r"""Finite ``L(1, pi_1 x pi_2)``; the dual kernel has a gamma pole at
    ``1 - s = 0``, so the value is the symmetric average at ``1 +- delta``."""
    L = gl2_rankin(_ap(f1, sign), _ap(f2, sign), 2, 2, p)
    return 0.5 * (completed_value(L, 1 + delta).value.real + completed_value(L, 1 - delta).value.real)


def mw_prediction(f: BrandtEigenform, S: IdealClassSet, D: int, Lam: ClassCharacter, sign: int = 1,
                  completed: bool = True, measure: str = "product") -> dict:
    r"""``|P|^2`` predicted by the toric-period formula combined with the
    quaternionic norm relation (weight 0, unramified ``Lambda``):
    ``|P|^2 = <f, f> L(1/2, pi x AI(Lambda)) / (2 p sqrt(D) L(1, pi, Ad))``."""
    p = S.p
    L = l_data(f, p, D, Lam, sign)
    pred = quaternionic_norm(f, S, sign) * L.ratio(completed) / (2 * p * math.sqrt(D))
    P = toric_period(f, S, D, Lam, sign, measure)
    return {"period_sq": abs(P) ** 2, "predicted": pred, "ratio": abs(P) ** 2 / pred if pred else math.nan,
            "L_central": L.central, "L_adjoint": L.adjoint, "errors": L.errors}


# ---------------------------------------------------------------------------
# the combined identity


@dataclass
class Formula1Report:
    p: int
    D: int
    char: int
    k: tuple
    bessel: complex  # classical scalar Bessel period of theta*
    lhs: float  # |B|^2 / <theta*, theta*> in units of e^{-4 pi tr S} / L(1, pi_1 x pi_2)
    rhs: dict  # {"completed": ..., "finite": ...} in the same units
    chain: dict  # composition of the four constituent identities, same units
    periods: tuple
    norms: tuple
    L_central: tuple
    L_adjoint: tuple
    L_rankin: float
    errors: tuple
    label: str = "extrapolated identity (unramified character, m = 0)"
    primary: str = "completed"

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs / self.rhs[self.primary] - 1)

    @property
    def bessel_over_periods(self) -> complex:
        """``scalarB(theta*) / (P_1 P_2)`` (product measure); 2 when the theta
        pairing and the toric periods are related as computed here."""
        P = self.periods[0] * self.periods[1]
        return self.bessel / P if abs(P) > 1e-300 else complex("nan")

    def to_json(self) -> dict:
        def c(z):
            return [complex(z).real, complex(z).imag]

        return {
            "p": self.p,
            "D": self.D,
            "char": self.char,
            "weights": list(self.k),
            "label": self.label,
            "bessel": c(self.bessel),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "chain": self.chain,
            "primary_convention": self.primary,
            "discrepancy": self.discrepancy,
            "lhs_over_rhs": {k: self.lhs / v for k, v in self.rhs.items()},
            "rhs_over_chain": {k: self.rhs[k] / self.chain[k] for k in self.rhs},
            "periods": [c(z) for z in self.periods],
            "bessel_over_periods": c(self.bessel_over_periods),
            "quaternionic_norms": list(self.norms),
            "L_central": list(self.L_central),
            "L_adjoint": list(self.L_adjoint),
            "L_rankin_at_1": self.L_rankin,
            "L_errors": list(self.errors),
        }


def verify_formula1(inst: YoshidaInstance, sign: int = 1, B: int | None = None) -> Formula1Report:
    r"""Both sides of the combined identity for ``|B_{S,Lambda,psi}(phi)|^2 / <theta*, theta*>``.

    (A) ``B_{S,Lambda,psi}(phi) = 2 e^{-2 pi tr S} scalarB(theta*)`` with the
    Bessel period of the computed coefficients, and
    ``<theta*, theta*> = <f_1,f_1><f_2,f_2> L(1, pi_1 x pi_2) 2^{-6} / (p^2 (1+1/p)(1+1/p^2))``.
    (B) ``2^5/D * 2(1+1/p)(1+1/p^2) * prod L(1/2) / (prod L(1, Ad) L(1, pi_1 x pi_2))``.
    Everything is reported in units of ``e^{-4 pi tr S}/L(1, pi_1 x pi_2)``,
    which cancel.  (B) and ``chain`` (Bessel 2 with the toric-period formula
    and both norm relations) are given with finite and with completed L-values;
    the completed ones are primary."""
    p, D = inst.p, inst.D
    S = inst.classes
    Lam = inst.Lam
    G = class_group(D)
    Phi = yoshida_coeffs(inst, B or max(D, 8))
    rep: BesselReport = bessel_vector(Phi, G, Lam)
    Bc = bessel_scalar(rep) if sign == 1 else _bessel_conj(rep)
    n1, n2 = quaternionic_norm(inst.f1, S, sign), quaternionic_norm(inst.f2, S, sign)
    pp = (1 + 1 / p) * (1 + 1 / p**2)
    theta_norm = n1 * n2 * 2.0**-6 / (p * p * pp)
    lhs = abs(2 * Bc) ** 2 / theta_norm
    d1 = l_data(inst.f1, p, D, Lam, sign)
    d2 = l_data(inst.f2, p, D, Lam.conj(), sign)
    rhs, chain = {}, {}
    for conv, flag in (("completed", True), ("finite", False)):
        r = d1.ratio(flag) * d2.ratio(flag)
        rhs[conv] = 2.0**5 / D * 2 * pp * r
        chain[conv] = n1 * n2 * r / (2 * p * math.sqrt(D)) ** 2 / theta_norm
    P1 = toric_period(inst.f1, S, D, Lam, sign)
    P2 = toric_period(inst.f2, S, D, Lam.conj(), sign)
    Lr = rankin_at_one(inst.f1, inst.f2, p, sign)
    return Formula1Report(p, D, inst.char, (inst.k1, inst.k2), Bc, lhs, rhs, chain, (P1, P2), (n1, n2),
                          (d1.central, d2.central), (d1.adjoint, d2.adjoint), Lr, d1.errors + d2.errors)


def _bessel_conj(rep: BesselReport) -> complex:
    import cmath

    vals, pref = rep.scalar_terms()
    s = sum((cmath.exp(2j * math.pi * float(a)) * embed(x, -1) for a, x in vals.items()), 0j)
    return s * float(pref)


# ---------------------------------------------------------------------------
# instance search


def find_instance(p: int, discs=(3, 4, 7, 8, 11, 19, 20, 23, 24), X: int = 1200) -> YoshidaInstance:
    r"""First ``(f_1, f_2, D, Lambda)`` at level ``p`` with distinct cusp forms
    sharing the Atkin-Lehner sign, ``p`` inert in ``E`` and both central values
    ``L(1/2, pi_1 x AI(Lambda))``, ``L(1/2, pi_2 x AI(Lambda^{-1}))`` nonzero."""
    S = ideal_classes(p)
    forms = [f for f in quat_eigenforms(BrandtSystem(S, X)) if not f.eisenstein]
    for D in discs:
        if kronecker(D, p) != -1:
            continue
        G = class_group(D)
        for i, f1 in enumerate(forms):
            for f2 in forms[i + 1 :]:
                if f1.eigenvalues[p] != f2.eigenvalues[p]:
                    continue
                for Lam in characters(G):
                    inst = YoshidaInstance(p, S, f1, f2, D, Lam.index)
                    P1 = toric_period(f1, S, D, Lam)
                    P2 = toric_period(f2, S, D, Lam.conj())
                    if abs(P1) > 1e-9 and abs(P2) > 1e-9:
                        return inst
    raise LookupError(f"no instance at level {p}")


def instance_for(p: int, D: int, char: int = 0, k1: int = 0, k2: int = 0, X: int = 1200) -> YoshidaInstance:
    """The first admissible pair of level-``p`` cusp forms for the given field and character."""
    S = ideal_classes(p)
    forms = [f for f in quat_eigenforms(BrandtSystem(S, X)) if not f.eisenstein]
    for i, f1 in enumerate(forms):
        for f2 in forms[i + 1 :]:
            if f1.eigenvalues[p] == f2.eigenvalues[p]:
                return YoshidaInstance(p, S, f1, f2, D, char, k1, k2)
    raise LookupError(f"no pair of cusp forms with equal Atkin-Lehner signs at level {p}")
