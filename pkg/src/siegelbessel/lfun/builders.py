"""Constructors for the concrete L-series used by the verifications."""

from __future__ import annotations

from ..quadforms import ClassCharacter, ClassGroup, class_group, kronecker
from .euler import EulerFactor, gl2_factor, motivic_weight, spinor_factor, tensor_factor, twist_factor
from .series import LSeries, gamma_C, gamma_R, primes_upto
from .theta import ai_factor


def zeta(P: int = 200) -> LSeries:
    facs = {int(p): EulerFactor(int(p), (1, -1)) for p in primes_upto(P)}
    return LSeries(1, 1, tuple(gamma_R(0)), facs, sign=None, poles=((1.0, 1.0), (0.0, -1.0)), label="zeta")


def dirichlet_quadratic(D: int, P: int | None = None) -> LSeries:
    r"""``L(s, chi_{-D})`` (odd character, conductor ``D``)."""
    P = P or max(200, 20 * int(D**0.5) + 50)
    facs = {}
    for p in primes_upto(P):
        p = int(p)
        c = kronecker(D, p)
        facs[p] = EulerFactor(p, (1, -c) if c else (1,))
    return LSeries(1, D, tuple(gamma_R(1)), facs, label=f"L(s,chi_-{D})")


def hecke_L(G: ClassGroup, chi: ClassCharacter, P: int) -> LSeries:
    """``L(s, AI(Lambda))``, weight-one theta series of level ``D``."""
    facs = {int(p): ai_factor(G, chi, int(p)) for p in primes_upto(P)}
    return LSeries(2, G.D, tuple(gamma_C(0)), facs, self_dual=chi.is_real, label=f"L(s,AI) D={G.D} chi={chi.index}")


def spinor_gamma(k: int, r: int = 0) -> tuple:
    r"""``Gamma_C(s + w/2) Gamma_C(s + r + 1/2)`` for ``det^k Sym^{2r}``."""
    w = motivic_weight(k, r)
    return tuple(gamma_C(w / 2) + gamma_C(r + 0.5))


def spinor_lseries(eig, P: int | None = None, level_factors: dict | None = None) -> LSeries:
    """Spinor L-series of a Hecke eigenform from :class:`HeckeEigenData`-like data
    (``eig.weight = (k, r)``, ``eig.eigenvalues = {p: (lam_p, lam_p2)}``)."""
    w = eig.weight
    k, r = (w.k, w.r) if hasattr(w, "k") else w
    facs = {}
    for p, (lp, lp2) in sorted(eig.eigenvalues.items()):
        if P is not None and p > P:
            continue
        if eig.level % p == 0:
            facs[p] = level_factors[p]
        else:
            facs[p] = spinor_factor(_num(lp), None if lp2 is None else _num(lp2), k, r, p)
    return LSeries(4, eig.level**2 if eig.level > 1 else 1, spinor_gamma(k, r), facs, label="spinor")


def _num(x):
    if isinstance(x, (int,)):
        return x
    try:
        from fractions import Fraction

        if isinstance(x, Fraction):
            return x
    except ImportError:  # pragma: no cover
        pass
    return float(x)


def twisted_spinor(spin: LSeries, D: int) -> LSeries:
    r"""``L(s, pi x chi_E)`` for odd squarefree-level ``pi`` unramified at ``D``."""
    facs = {p: twist_factor(f, kronecker(D, p)) for p, f in spin.factors.items()}
    return LSeries(4, spin.conductor * D**4, spin.gamma_shifts, facs, label=f"spinor x chi_-{D}")


def rankin_ai(spin: LSeries, G: ClassGroup, chi: ClassCharacter) -> LSeries:
    r"""``L(s, pi x AI(Lambda))``: degree 8, conductor ``N_pi^2 D^4``; gamma factor
    ``prod Gamma_C(s + mu)^2`` since ``AI(Lambda)_infinity`` has parameter ``Gamma_C(s)``."""
    facs = {p: tensor_factor(f, ai_factor(G, chi, p)) for p, f in spin.factors.items()}
    gam = tuple(spin.gamma_shifts) * 2
    return LSeries(8, spin.conductor**2 * G.D**4, tuple(sorted(gam)), facs, self_dual=chi.is_real,
                   label=f"spinor x AI D={G.D} chi={chi.index}")


def elliptic_lseries(ap: dict, weight: int, level: int, eps_level: dict | None = None) -> LSeries:
    """L-series of a newform with Hecke eigenvalues ``ap`` (trivial character)."""
    facs = {p: gl2_factor(a, weight, p, level) for p, a in ap.items()}
    return LSeries(2, level, tuple(gamma_C((weight - 1) / 2)), facs, label=f"newform wt{weight} N{level}")


def elliptic_twist(ap: dict, weight: int, level: int, D: int) -> LSeries:
    facs = {}
    for p, a in ap.items():
        f = gl2_factor(a, weight, p, level)
        facs[p] = twist_factor(f, kronecker(D, p))
    return LSeries(2, level * D * D, tuple(gamma_C((weight - 1) / 2)), facs, label=f"newform wt{weight} N{level} x chi_-{D}")


def class_group_of(D: int) -> ClassGroup:
    return class_group(D)


def gl2_adjoint(ap: dict, weight: int, level: int) -> LSeries:
    r"""``L(s, pi, Ad)`` for a newform of squarefree level with trivial character:
    ``(1 - (t^2 - 1) X + (t^2 - 1) X^2 - X^3)`` with ``t = a_p p^{-(weight-1)/2}``
    off the level, ``1 - X/p`` at a Steinberg prime."""
    facs = {}
    for p, a in ap.items():
        if level % p == 0:
            facs[p] = EulerFactor(p, (1, -1 / p))
        else:
            u = complex(a) ** 2 * float(p) ** (1 - weight) - 1
            u = u.real if abs(u.imag) < 1e-15 else u
            facs[p] = EulerFactor(p, (1, -u, u, -1))
    return LSeries(3, level * level, tuple(gamma_R(1) + gamma_C(weight - 1)), facs, sign=1, label=f"Ad newform wt{weight} N{level}")


def gl2_rankin(ap1: dict, ap2: dict, w1: int, w2: int, level: int) -> LSeries:
    r"""``L(s, pi_1 x pi_2)`` for distinct newforms of the same prime level
    ``p`` (both Steinberg at ``p``, unramified twists ``mu_i = a_p(i) p^{1 - w_i/2}``):
    the local factor at ``p`` is ``(1 - mu_1 mu_2 X / p)(1 - mu_1 mu_2 X)``."""
    facs = {}
    for p in ap1:
        if p not in ap2:
            continue
        if level % p == 0:
            mu = complex(ap1[p]) * p ** (1 - w1 / 2) * complex(ap2[p]) * p ** (1 - w2 / 2)
            mu = mu.real
            facs[p] = EulerFactor(p, (1, -mu * (1 + 1 / p), mu * mu / p))
        else:
            facs[p] = tensor_factor(gl2_factor(ap1[p], w1, p), gl2_factor(ap2[p], w2, p))
    hi, lo = max(w1, w2), min(w1, w2)
    gam = tuple(gamma_C((hi + lo) / 2 - 1) + gamma_C((hi - lo) / 2))
    return LSeries(4, level * level, gam, facs, sign=1, label="Rankin-Selberg GL2 x GL2")


def gl2_times_ai(ap: dict, weight: int, level: int, G: ClassGroup, chi: ClassCharacter) -> LSeries:
    r"""``L(s, pi x AI(Lambda))``: degree 4, conductor ``level^2 D^2`` for ``gcd(level, D) = 1``."""
    facs = {p: tensor_factor(gl2_factor(a, weight, p, level), ai_factor(G, chi, p)) for p, a in ap.items()}
    gam = tuple(gamma_C((weight - 1) / 2)) * 2
    return LSeries(4, level * level * G.D * G.D, gam, facs, self_dual=chi.is_real,
                   label=f"newform wt{weight} N{level} x AI D={G.D} chi={chi.index}")
