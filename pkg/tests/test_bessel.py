import cmath
import random
from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegelbessel.bessel import (
    bessel_vector,
    invariant_pairing,
    pairing_n,
    q_poly,
    quadratic_power,
    rho,
    torus_average_numeric,
    torus_projector,
)
from siegelbessel.quadforms import BQF, characters, class_group, matrix_SE
from siegelbessel.siegel.expansion import TruncationError
from siegelbessel.siegel.halfint import conj_action
from siegelbessel.siegel.ring import eisenstein, igusa_cusp_generators
from siegelbessel.siegel.satoh import satoh_bracket


@pytest.fixture(scope="module")
def chi():
    return igusa_cusp_generators(60)


@pytest.fixture(scope="module")
def satoh():
    chi10 = igusa_cusp_generators(60)[0]
    return satoh_bracket(eisenstein(4, 60), chi10)


def direct_bessel(F, D, j):
    """``w^{-1} sum_c Lambda(c)^{-1} a(S_c)`` for a scalar form."""
    G = class_group(D)
    lam = characters(G)[j]
    s = sum(cmath.exp(-2j * pi * float(lam.angles[i])) * float(F[tuple(f)][0]) for i, f in enumerate(G.reduced))
    return s / G.wE


def unimodular(rng):
    g = ((1, 0), (0, 1))
    for _ in range(rng.randint(1, 5)):
        h = rng.choice([((1, 1), (0, 1)), ((1, -1), (0, 1)), ((0, -1), (1, 0))])
        g = ((g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
             (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]))
    return g


# -- pairings --------------------------------------------------------------------


def test_pairing_examples():
    # n = 1: (Y, X) = 1, (X, Y) = -1
    assert pairing_n((1, 0), (0, 1)) == 1
    assert pairing_n((0, 1), (1, 0)) == -1
    # n = 2 on (Y^2, XY, X^2): middle weight -2
    assert pairing_n((0, 1, 0), (0, 1, 0)) == -2
    assert pairing_n((1, 0, 0), (0, 0, 1)) == 1
    assert invariant_pairing((0, 1, 0), (0, 1, 0)) == Fraction(-1, 2)
    with pytest.raises(ValueError):
        pairing_n((1, 0), (1, 0, 0))


def test_literal_pairing_is_not_equivariant():
    g = ((1, 1), (0, 1))
    P, Q = (1, 0, 0), (1, 0, 0)  # Y^2 with itself
    assert pairing_n(P, Q) == 0
    assert pairing_n(rho(g, 2, 0, P), rho(g, 2, 0, Q)) == -6
    assert invariant_pairing(rho(g, 2, 0, P), rho(g, 2, 0, Q)) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 3))
def test_invariant_pairing_is_equivariant(seed, n, k):
    rng = random.Random(seed)
    g = unimodular(rng)
    if rng.random() < 0.5:
        g = (g[0], (-g[1][0], -g[1][1]))  # det -1
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    P = tuple(Fraction(rng.randint(-5, 5)) for _ in range(n + 1))
    Q = tuple(Fraction(rng.randint(-5, 5)) for _ in range(n + 1))
    lhs = invariant_pairing(rho(g, n, k, P), rho(g, n, k, Q))
    assert lhs == det ** (n + 2 * k) * invariant_pairing(P, Q)


# -- torus projection -------------------------------------------------------------


@pytest.mark.parametrize("D", [3, 4, 23, 84])
@pytest.mark.parametrize("n", [2, 4])
def test_projector_matches_torus_average(D, n):
    S = matrix_SE(D)
    P = torus_projector(S, n)
    assert P.is_idempotent()
    assert np.linalg.matrix_rank(np.array(P.matrix, dtype=float)) == 1
    avg = np.array(torus_average_numeric(S, n, steps=360))
    assert np.allclose(avg, np.array(P.matrix, dtype=float), atol=1e-12)
    Q = quadratic_power(S, n // 2)
    assert P(Q) == Q


def test_projector_odd_degree_is_zero():
    assert all(x == 0 for row in torus_projector(matrix_SE(23), 3).matrix for x in row)


def test_q_poly_prefactor():
    Q = q_poly(matrix_SE(23), 1, 10)
    assert Q.prefactor.q == 2**12 and Q.prefactor.D == 23 and Q.prefactor.e == -12
    assert Q.poly == quadratic_power(matrix_SE(23), 1)


# -- periods -------------------------------------------------------------------------


@pytest.mark.parametrize("D", [3, 4, 23, 47, 56])
def test_scalar_period_matches_direct_sum(chi, D):
    for F in chi:
        G = class_group(D)
        for j in range(G.h):
            rep = bessel_vector(F, G, characters(G)[j])
            direct = direct_bessel(F, D, j)
            assert abs(rep.vectorB[0] - direct) < 1e-9 * (1 + abs(direct))
            assert abs(rep.scalarB - 2**F.weight.k * D ** (-F.weight.k / 2) * direct) < 1e-9 * (1 + abs(direct))


def test_known_values(chi):
    chi10, chi12 = chi
    G4 = class_group(4)
    assert bessel_vector(chi10, G4, characters(G4)[0]).vectorB[0] == pytest.approx(-0.5)
    G23 = class_group(23)
    for F in (chi10, chi12):
        for lam in characters(G23)[1:]:
            rep = bessel_vector(F, G23, lam)
            assert rep.terms == {}
            assert rep.scalarB == 0


def test_representative_invariance(satoh):
    rng = random.Random(3)
    for D in (23, 47, 56):
        G = class_group(D)
        for lam in characters(G):
            base = bessel_vector(satoh, G, lam)
            reps = {}
            for i, f in enumerate(G.reduced):
                g = unimodular(rng)
                reps[i] = BQF(*conj_action(g, tuple(f)))
            other = bessel_vector(satoh, G, lam, reps)
            assert other.terms == base.terms
            assert other.scalarB == pytest.approx(base.scalarB, abs=1e-12)


def test_vector_period_lies_on_invariant_line(satoh):
    G = class_group(47)
    S = matrix_SE(47)
    P = torus_projector(S, 2)
    for lam in characters(G):
        rep = bessel_vector(satoh, G, lam)
        for v in rep.terms.values():
            assert P(v) == tuple(v)


def test_bound_is_enforced(chi):
    G = class_group(71)
    with pytest.raises(TruncationError):
        bessel_vector(chi[0], G, characters(G)[0])


def test_character_must_match_group(chi):
    G = class_group(23)
    with pytest.raises(ValueError):
        bessel_vector(chi[0], G, characters(class_group(47))[1])


def test_report_json(satoh):
    G = class_group(23)
    doc = bessel_vector(satoh, G, characters(G)[1]).to_json()
    assert doc["D"] == 23 and doc["weight"] == [14, 1]
    assert len(doc["vectorB"]) == 3
