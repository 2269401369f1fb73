r"""L-series from Euler factors and their numerical evaluation.

Gamma data is stored as a list of shifts ``mu_j`` with
``gamma(s) = prod_j Gamma_R(s + mu_j)``, ``Gamma_R(s) = pi^{-s/2} Gamma(s/2)``;
``Gamma_C(s + mu) = Gamma_R(s + mu) Gamma_R(s + mu + 1)``.  The completed
function ``Lambda(s) = N^{s/2} gamma(s) L(s)`` satisfies
``Lambda(s) = eps * conj(Lambda)(1 - s)``.

Values are computed with the smoothed approximate functional equation

.. math::

   \Lambda(s) = \sum_n a_n n^{-s} N^{s/2} \gamma(s) I(s, n/(t\sqrt N))
              + \varepsilon \sum_n \bar a_n n^{s-1} N^{(1-s)/2} \gamma(1-s) I(1-s, nt/\sqrt N)
              - (\text{pole terms})

where ``I(s, x) = (2 pi i)^{-1} \int_{(c)} gamma(s+w)/gamma(s) x^{-w} dw / w``.
The free scale ``t`` gives two independent evaluations, from which the root
number is fitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, log

import numpy as np
from scipy.special import loggamma



def gamma_R(mu: float) -> list[float]:
    return [float(mu)]


def gamma_C(mu: float) -> list[float]:
    return [float(mu), float(mu) + 1.0]


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.nonzero(sieve)[0]


def smallest_prime_factor(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        block = spf[p :: p]
        block[block == 0] = p
    return spf


@dataclass
class LSeries:
    """Euler product with gamma data.  ``factors[p]`` must be present for every
    prime whose powers occur among the Dirichlet coefficients requested; primes
    absent from ``factors`` are an error, not an implicit ``1``."""

    degree: int
    conductor: int
    gamma_shifts: tuple
    factors: dict = field(repr=False)
    sign: complex | None = None
    self_dual: bool = True
    poles: tuple = ()
    label: str = ""

    def max_terms(self) -> int:
        """Largest ``M`` such that ``a_1..a_M`` are all determined."""
        if not self.factors:
            return 1
        M = None
        P = max(self.factors)
        ps = primes_upto(P + 1)
        for p in ps:
            p = int(p)
            f = self.factors.get(p)
            if f is None:
                return p - 1 if M is None else min(M, p - 1)
            if f.exact_order is not None:
                lim = p ** (f.exact_order + 1) - 1
                M = lim if M is None else min(M, lim)
        nxt = P + 1
        while True:
            if all(nxt % q for q in range(2, int(nxt**0.5) + 1)):
                break
            nxt += 1
        lim = nxt - 1
        return lim if M is None else min(M, lim)

    def coefficients(self, M: int) -> np.ndarray:
        """``a[0..M]`` with ``a[0] = 0``."""
        a = np.zeros(M + 1, dtype=complex)
        a[1] = 1.0
        spf = smallest_prime_factor(M)
        local: dict[int, list] = {}
        for n in range(2, M + 1):
            p = int(spf[n])
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            if p not in local:
                f = self.factors.get(p)
                if f is None:
                    raise ValueError(f"{self.label}: no Euler factor at p={p}")
                emax = 0
                q = p
                while q <= M:
                    q *= p
                    emax += 1
                local[p] = [complex(x) for x in f.inverse_series(emax)]
                local[p].append(f.exact_order)
            if local[p][-1] is not None and e > local[p][-1]:
                raise ValueError(f"{self.label}: factor at p={p} only valid to order {local[p][-1]}")
            a[n] = a[m] * local[p][e]
        return a

    def ramanujan_bounds(self, M: int) -> np.ndarray:
        """``d_deg(n)``: the coefficient bound implied by unitary Satake parameters."""
        d = self.degree
        b = np.ones(M + 1)
        b[0] = 0
        spf = smallest_prime_factor(M)
        for n in range(2, M + 1):
            p = int(spf[n])
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            b[n] = b[m] * comb(e + d - 1, d - 1)
        return b

    def log_gamma(self, s) -> complex:
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for mu in self.gamma_shifts:
            out = out - (s + mu) / 2 * log(np.pi) + loggamma((s + mu) / 2)
        return out


# contour for the smoothing integrals
_C = 1.25
_H = 0.05


def _kernel_grid(L: LSeries, s: complex):
    lg0 = L.log_gamma(s)
    Y = 8.0
    while (L.log_gamma(s + _C + 1j * Y) - lg0).real > -40 - 2 * abs(lg0.real) * 0:
        Y *= 1.25
    y = np.arange(-Y, Y + _H / 2, _H)
    w = _C + 1j * y
    logR = L.log_gamma(s + w) - lg0
    weight = np.exp(logR) / w * (_H / (2 * np.pi))
    return w, weight


def smoothing_integral(L: LSeries, s: complex, x: np.ndarray) -> np.ndarray:
    r"""``I(s, x)`` for an array of ``x > 0`` by trapezoidal quadrature on
    ``Re w = c``; the integrand is holomorphic near the line and decays
    exponentially through the gamma factors, so the rule converges geometrically."""
    w, weight = _kernel_grid(L, s)
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=complex)
    chunk = 4096
    for i in range(0, x.size, chunk):
        lx = np.log(x.ravel()[i : i + chunk])
        out.ravel()[i : i + chunk] = np.exp(-np.outer(lx, w)) @ weight
    return out


def _pole_terms(L: LSeries, s: complex, t: float) -> complex:
    """Residues of ``Lambda(s+w) t^w / w`` at the poles of ``Lambda``."""
    tot = 0j
    for z0, res in L.poles:
        w0 = z0 - s
        tot += res * t**w0 / w0
    return tot


@dataclass
class LValue:
    value: complex
    error: float
    sign: complex
    terms: int
    completed: complex
    log_gamma_factor: complex

    def __float__(self):
        return float(self.value.real)


def _sums(L: LSeries, s: complex, a: np.ndarray, t: float):
    n = np.arange(1, a.size)
    sqN = np.sqrt(L.conductor)
    lg_s, lg_1s = L.log_gamma(s), L.log_gamma(1 - s)
    I1 = smoothing_integral(L, s, n / (t * sqN))
    I2 = smoothing_integral(L, 1 - s, n * t / sqN)
    an = a[1:]
    dual = np.conj(an)
    logn = np.log(n)
    A = np.exp(s / 2 * np.log(L.conductor) + lg_s) * np.sum(an * np.exp(-s * logn) * I1)
    B = np.exp((1 - s) / 2 * np.log(L.conductor) + lg_1s) * np.sum(dual * np.exp((s - 1) * logn) * I2)
    return A - _pole_terms(L, s, t), B


def completed_value(L: LSeries, s: complex, M: int | None = None, scales=(1.0, 1.3)) -> LValue:
    r"""``Lambda(s)`` with the root number fitted from two smoothing scales
    (or taken from ``L.sign`` if set)."""
    M = L.max_terms() if M is None else M
    a = L.coefficients(M)
    s = complex(s)
    A1, B1 = _sums(L, s, a, scales[0])
    if L.sign is not None:
        eps = complex(L.sign)
    else:
        A2, B2 = _sums(L, s, a, scales[1])
        if abs(B1 - B2) < 1e-12 * (abs(B1) + abs(B2) + 1e-300):
            raise ArithmeticError("root number not identifiable at this point")
        eps = (A2 - A1) / (B1 - B2)
    Lam = A1 + eps * B1
    err = _tail_error(L, s, M)
    lg = L.log_gamma(s)
    return LValue(Lam / np.exp(s / 2 * np.log(L.conductor) + lg), err, eps, M, Lam, lg)


def fit_sign(L: LSeries, M: int | None = None, s: complex = 0.5 + 0.37j) -> complex:
    """Root number fitted at an auxiliary point off the real axis."""
    M = L.max_terms() if M is None else M
    a = L.coefficients(M)
    A1, B1 = _sums(L, complex(s), a, 1.0)
    A2, B2 = _sums(L, complex(s), a, 1.3)
    return (A2 - A1) / (B1 - B2)


def _tail_error(L: LSeries, s: complex, M: int) -> float:
    """Ramanujan-bound estimate of the truncation error in ``L(s)``."""
    sqN = np.sqrt(L.conductor)
    sig = s.real
    tot = 0.0
    Mmax = M
    # extend until the smoothing weight is negligible (quadrature noise ~1e-16)
    while True:
        Mmax = 2 * Mmax + 16
        xe = np.array([Mmax / sqN])
        if abs(smoothing_integral(L, s, xe)[0]) < 1e-14 and abs(smoothing_integral(L, 1 - s, xe)[0]) < 1e-14:
            break
        if Mmax > 20 * M + 1000:
            break
    bnd = L.ramanujan_bounds(Mmax)[M + 1 :]
    n = np.arange(M + 1, Mmax + 1)
    I1 = np.abs(smoothing_integral(L, s, n / sqN))
    I2 = np.abs(smoothing_integral(L, 1 - s, n / sqN))
    ratio = np.exp(((1 - s) / 2 * np.log(L.conductor) + L.log_gamma(1 - s)) - (s / 2 * np.log(L.conductor) + L.log_gamma(s)))
    tot = np.sum(bnd * n ** (-sig) * I1) + abs(ratio) * np.sum(bnd * n ** (sig - 1) * I2)
    return float(tot)


def central_value(L: LSeries, s0: float = 0.5, M: int | None = None) -> LValue:
    r"""``L(s0)`` for ``s0`` in ``{1/2, 1}`` with a Ramanujan-bound error estimate."""
    return completed_value(L, s0, M)


def euler_product_value(L: LSeries, s0: float, P: int | None = None) -> LValue:
    r"""``prod_{p <= P} L_p(s0)`` directly, for ``s0`` at the edge of absolute
    convergence (adjoint-type series at ``s = 1``).  The error estimate is the
    size of the last dyadic block of factors, a heuristic for the tail."""
    ps = sorted(L.factors) if P is None else [p for p in sorted(L.factors) if p <= P]
    logs = np.array([-np.log(complex(L.factors[p](p ** (-s0)))) for p in ps])
    val = np.exp(np.sum(logs))
    half = len(ps) // 2
    tail = abs(np.sum(logs[half:])) if ps else float("inf")
    return LValue(val, float(abs(val) * tail / max(1.0, np.log2(max(ps[-1], 2)))), 1.0, len(ps), np.nan, 0j)
