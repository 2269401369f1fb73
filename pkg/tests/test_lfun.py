import cmath
import random
from fractions import Fraction
from math import pi, sqrt

import mpmath
import numpy as np
import pytest
import sympy as sp
from flint import fmpz_poly
from hypothesis import given, settings
from hypothesis import strategies as st

from siegelbessel.lfun import (
    EulerFactor,
    adjoint_factor,
    completed_value,
    euler_product_value,
    gamma_constants,
    jp_factor,
    spinor_factor,
    spinor_factor_classical,
    tensor_factor,
    twist_factor,
)
from siegelbessel.lfun.builders import dirichlet_quadratic, elliptic_lseries, hecke_L, zeta
from siegelbessel.lfun.euler import from_power_sums, power_sums
from siegelbessel.lfun.series import primes_upto
from siegelbessel.lfun.theta import ai_theta, check_multiplicative_exact
from siegelbessel.quadforms import characters, class_group, kronecker


def tau_coeffs(M):
    q = fmpz_poly([0, 1])
    prod = fmpz_poly([1])
    for n in range(1, M + 1):
        f = fmpz_poly([1] + [0] * (n - 1) + [-1])
        for _ in range(24):
            prod = fmpz_poly((prod * f).coeffs()[: M + 1])
    d = (q * prod).coeffs()
    return [int(x) for x in d[: M + 1]] + [0] * (M + 1 - len(d))


def delta_e6(M):
    tau = tau_coeffs(M)
    e6 = [1] + [-504 * sum(d**5 for d in range(1, n + 1) if n % d == 0) for n in range(1, M + 1)]
    return [sum(tau[i] * e6[n - i] for i in range(n + 1)) for n in range(M + 1)]


def gC(s):
    return 2 * (2 * mpmath.pi) ** (-s) * mpmath.gamma(s)


def gR(s):
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2)


# -- classical values ------------------------------------------------------------------


def test_dirichlet_values():
    v = completed_value(dirichlet_quadratic(4), 1.0)
    assert abs(v.value - pi / 4) < 1e-10
    assert abs(v.sign - 1) < 1e-8
    for D, h, w in [(23, 3, 2), (47, 5, 2), (3, 1, 6), (84, 4, 2)]:
        L1 = completed_value(dirichlet_quadratic(D), 1.0).value.real
        assert abs(L1 * w * sqrt(D) / (2 * pi) - h) < 1e-8


def test_zeta_with_poles():
    Z = zeta(400)
    assert abs(completed_value(Z, 2.0).value - pi**2 / 6) < 1e-9
    assert abs(completed_value(Z, 0.5).value - float(mpmath.zeta(0.5))) < 1e-9


def test_functional_equation_residual():
    L = dirichlet_quadratic(23)
    for s in (0.3 + 0.2j, 0.5 + 1.1j):
        a, b = completed_value(L, s), completed_value(L, 1 - s)
        assert abs(a.completed - b.completed) < 1e-9 * abs(a.completed)


def test_delta_central_value_against_mellin_integral():
    M = 60
    tau = tau_coeffs(M)
    assert tau[1:6] == [1, -24, 252, -1472, 4830]
    ap = {int(p): tau[p] for p in primes_upto(M)}
    L = elliptic_lseries(ap, 12, 1)
    v = completed_value(L, 0.5)
    # Lambda(6) = 2 int_1^inf Delta(iy) y^5 dy, summed termwise
    mp = mpmath.mp
    mp.dps = 30
    lam = 2 * sum(tau[n] * mpmath.gammainc(6, 2 * mpmath.pi * n) / (2 * mpmath.pi * n) ** 6 for n in range(1, M + 1))
    ref = lam * (2 * mpmath.pi) ** 6 / mpmath.gamma(6)
    assert abs(v.value.real - float(ref)) < 1e-9
    assert abs(v.sign - 1) < 1e-8
    assert v.error < 1e-6


def test_euler_product_value_converges():
    Z = zeta(20000)
    v = euler_product_value(Z, 2.0)
    assert abs(v.value.real - pi**2 / 6) < 1e-4


def test_missing_factor_is_an_error():
    L = dirichlet_quadratic(23, 50)
    with pytest.raises(ValueError):
        L.coefficients(60)


# -- automorphic induction --------------------------------------------------------------


@pytest.mark.parametrize("D", [23, 47, 56, 84, 87])
def test_ai_multiplicative_and_matches_euler_product(D):
    G = class_group(D)
    for chi in characters(G):
        ok, witness = check_multiplicative_exact(G, chi, 300)
        assert ok, witness
        theta = ai_theta(G, chi, 300).coeffs
        L = hecke_L(G, chi, 300)
        assert np.allclose(L.coefficients(300)[1:], theta[1:], atol=1e-10)


def test_ai_trivial_is_zeta_times_dirichlet():
    G = class_group(23)
    a = hecke_L(G, characters(G)[0], 200).coefficients(200)
    chi = [kronecker(23, n) for n in range(201)]
    ref = [0] + [sum(chi[d] for d in range(1, n + 1) if n % d == 0) for n in range(1, 201)]
    assert np.allclose(a, ref)


def test_ai_order3_value_is_finite():
    G = class_group(23)
    v = completed_value(hecke_L(G, characters(G)[1], 400), 0.5)
    assert abs(v.sign - 1) < 1e-6
    assert abs(v.value.imag) < 1e-9


# -- local algebra ---------------------------------------------------------------------


def unit_roots(rng, n):
    return [cmath.exp(2j * pi * rng.random()) for _ in range(n)]


def poly_from_roots(roots):
    c = np.poly(roots)  # monic in x; reverse for 1 - r X
    return tuple(complex(x) for x in c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tensor_and_adjoint_from_roots(seed):
    rng = random.Random(seed)
    a, b = unit_roots(rng, 2)
    spin_roots = [a, b, 1 / a, 1 / b]
    S = EulerFactor(5, poly_from_roots(spin_roots))
    adj = [x * y for i, x in enumerate(spin_roots) for y in spin_roots[i:]]
    A = adjoint_factor(S)
    assert np.allclose(np.array(A.poly, dtype=complex), poly_from_roots(adj), atol=1e-9)
    c, d = unit_roots(rng, 2)
    T = EulerFactor(5, poly_from_roots([c, d]))
    prod = tensor_factor(S, T)
    assert np.allclose(np.array(prod.poly, dtype=complex), poly_from_roots([x * y for x in spin_roots for y in (c, d)]), atol=1e-9)
    tw = twist_factor(T, -1)
    assert np.allclose(np.array(tw.poly, dtype=complex), poly_from_roots([-c, -d]), atol=1e-12)


def test_power_sums_round_trip():
    poly = (1, Fraction(-3, 2), Fraction(7, 5), 4)
    assert from_power_sums(power_sums(poly, 3), 3) == list(poly)


def test_adjoint_rejects_non_symplectic():
    with pytest.raises(ValueError):
        adjoint_factor(EulerFactor(3, (1, 1, 0, 0, 2)))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_spinor_factor_of_saito_kurokawa_form(p):
    # chi10: elliptic preimage of weight 18, a_p from Delta * E6
    k = 10
    a = delta_e6(8)[p]
    lam = a + p ** (k - 1) + p ** (k - 2)
    c2 = 2 * p ** (2 * k - 3) + a * (p ** (k - 1) + p ** (k - 2))
    lam2 = lam * lam - p ** (2 * k - 4) - c2
    X = sp.Symbol("X")
    expected = sp.expand((1 - p ** (k - 1) * X) * (1 - p ** (k - 2) * X) * (1 - a * X + p ** (2 * k - 3) * X**2))
    got = sum(c * X**i for i, c in enumerate(spinor_factor_classical(lam, lam2, k, 0, p)))
    assert sp.expand(got - expected) == 0
    F = spinor_factor(lam, lam2, k, 0, p)
    assert F.poly[4] == 1 and F.poly[1] == F.poly[3]


def test_spinor_factor_first_order_only():
    F = spinor_factor(240, None, 10, 0, 2)
    assert F.exact_order == 1 and F.degree == 1


# -- archimedean constants -------------------------------------------------------------


@pytest.mark.parametrize("k,r", [(10, 0), (12, 0), (20, 0), (7, 1), (10, 2), (4, 3)])
def test_gamma_constants_against_hodge_factors(k, r):
    mpmath.mp.dps = 40
    c_center, c_adj = (mpmath.mpf(str(sp.N(x, 50))) for x in gamma_constants(k, r))
    w = 2 * k + 2 * r - 3
    s = mpmath.mpf(1) / 2
    center = (gC(s + mpmath.mpf(w) / 2) * gC(s + r + mpmath.mpf(1) / 2)) ** 2
    s = 1
    adj = gC(s + w) * gC(s + 2 * r + 1) * gC(s + k + 2 * r - 1) * gC(s + k - 2) * gR(s + 1) ** 2
    assert abs(adj / c_adj - 1) < 1e-30
    assert abs(center / c_center - (2 * mpmath.pi) ** (-2 * r)) < 1e-30


def test_gamma_constants_reject_small_weight():
    with pytest.raises(ValueError):
        gamma_constants(1, 0)


def test_jp_factor_table():
    assert jp_factor(3, "IIIa") == Fraction(10, 9) * Fraction(4, 3)
    assert jp_factor(5, "VIb") == 2 * Fraction(26, 25) * Fraction(6, 5)
    assert jp_factor(7, "other") == 0
    with pytest.raises(ValueError):
        jp_factor(7, "I")
