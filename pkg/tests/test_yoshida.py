import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegelbessel.bessel import bessel_scalar, bessel_vector
from siegelbessel.lfun.euler import spinor_factor_classical
from siegelbessel.quadforms import characters, class_group
from siegelbessel.yoshida import (
    BrandtSystem,
    QuadraticNumber,
    QuaternionOrder,
    YoshidaInstance,
    YoshidaLift,
    brandt,
    ideal_classes,
    mw_prediction,
    quat_eigenforms,
    quaternionic_norm,
    spinor_check,
    theta_counts,
    toric_period,
    torus_points,
    verify_formula1,
    yoshida_coeffs,
)
from siegelbessel.yoshida.quaternion import short_vectors


@pytest.fixture(scope="module")
def level11():
    S = ideal_classes(11)
    return S, BrandtSystem(S, 1200)


@pytest.fixture(scope="module")
def level23():
    S = ideal_classes(23)
    B = BrandtSystem(S, 1200)
    forms = quat_eigenforms(B)
    return S, B, [f for f in forms if not f.eisenstein], [f for f in forms if f.eisenstein]


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


# --- oracles: q-expansions from eta products -------------------------------


def eta_product(exps: dict, start: int, N: int) -> list:
    """Coefficients of q^start prod_m prod_n (1 - q^{mn})^{e_m}, indices 0..N."""
    c = [0] * (N + 1)
    c[start] = 1
    for m, e in exps.items():
        for _ in range(e):
            for n in range(1, N // m + 1):
                step = m * n
                for i in range(N, step - 1, -1):
                    c[i] -= c[i - step]
    return c


def theta_bqf(a, b, cc, N) -> list:
    t = [0] * (N + 1)
    R = int(math.isqrt(4 * N)) + 2
    for x in range(-R, R + 1):
        for y in range(-R, R + 1):
            v = a * x * x + b * x * y + cc * y * y
            if v <= N:
                t[v] += 1
    return t


def mul_series(u, v, N):
    return [sum(u[i] * v[n - i] for i in range(n + 1)) for n in range(N + 1)]


# --- quaternion orders and ideal classes ----------------------------------


@pytest.mark.parametrize("p", [11, 13, 17, 19, 23, 37])
def test_eichler_mass_exact(p):
    S = ideal_classes(p)
    assert S.mass == Fraction(p - 1, 24)


def test_class_numbers():
    assert ideal_classes(11).h == 2
    assert ideal_classes(13).mass == Fraction(1, 2)
    assert ideal_classes(23).units == [4, 2, 6]


@pytest.mark.parametrize("p", [7, 11, 13, 17, 41])
def test_order_models_are_maximal(p):
    O = QuaternionOrder(p)
    assert O.discriminant == p * p


def test_p2_rejected():
    with pytest.raises(ValueError):
        QuaternionOrder(2)


# --- Brandt matrices -------------------------------------------------------


def test_brandt_identity_and_row_sums(level11):
    _, B = level11
    assert brandt(B, 1) == [[1, 0], [0, 1]]
    for q in (2, 3, 5, 7, 13):
        assert all(sum(r) == q + 1 for r in brandt(B, q))


def test_brandt_multiplicative_level11(level11):
    _, B = level11
    assert matmul(brandt(B, 2), brandt(B, 3)) == brandt(B, 6)


@pytest.mark.parametrize("p", [11, 13, 17, 19, 23])
def test_brandt_commute(p):
    B = BrandtSystem(ideal_classes(p), 40)
    for m, n in ((2, 3), (3, 5), (2, 7), (5, 7)):
        assert matmul(B.matrix(m), B.matrix(n)) == B.matrix(m * n)
        assert matmul(B.matrix(m), B.matrix(n)) == matmul(B.matrix(n), B.matrix(m))


def test_brandt_self_adjoint(level23):
    S, B, _, _ = level23
    e = S.units
    for n in (2, 3, 6, 23):
        M = B.matrix(n)
        for i in range(S.h):
            for j in range(S.h):
                assert M[i][j] / e[i] == M[j][i] / e[j]


def test_theta_counts_match_enumeration(level23):
    S, _, _, _ = level23
    for i, j in ((0, 0), (0, 1), (1, 2)):
        _, G = S.hom_lattice(i, j)
        c = theta_counts(G, 12)
        sv = short_vectors(G, 24)
        assert [int(x) for x in c] == [len(sv.get(2 * m, [])) for m in range(13)]


# --- eigenforms ------------------------------------------------------------


def test_level11_eigenforms_match_eta_product(level11):
    _, B = level11
    N = 50
    forms = quat_eigenforms(B, list(range(1, N + 1)))
    eis = [f for f in forms if f.eisenstein]
    cusp = [f for f in forms if not f.eisenstein]
    assert len(eis) == 1 and len(cusp) == 1
    oracle = eta_product({1: 2, 11: 2}, 1, N)
    assert [cusp[0].eigenvalues[n] for n in range(1, N + 1)] == oracle[1:]
    assert all(eis[0].eigenvalues[q] == q + 1 for q in (2, 3, 5, 7))


def test_level23_eigenforms_match_eta_basis(level23):
    S, _, _, _ = level23
    N = 50
    forms = [f for f in quat_eigenforms(BrandtSystem(S, N), list(range(1, N + 1))) if not f.eisenstein]
    assert len(forms) == 2
    g1 = eta_product({1: 2, 23: 2}, 2, N)
    g2 = mul_series(eta_product({1: 1, 23: 1}, 1, N), theta_bqf(1, 1, 6, N), N)
    for f in forms:
        a = [f.eigenvalues[n] for n in range(1, N + 1)]
        c = a[1] - g2[2]
        for n in range(1, N + 1):
            assert a[n - 1] == g2[n] + c * g1[n]
        assert a[1] * a[1] + a[1] - 1 == 0  # a_2 generates Q(sqrt 5)


def test_atkin_lehner_signs_agree(level23):
    _, _, cusp, _ = level23
    assert cusp[0].eigenvalues[23] == cusp[1].eigenvalues[23] == 1


@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), st.fractions(max_denominator=50),
       st.fractions(max_denominator=50))
def test_quadratic_field_arithmetic(a, b, c, d):
    x, y = QuadraticNumber(a, b, 5), QuadraticNumber(c, d, 5)
    assert (x * y) * (x + y) == x * x * y + x * y * y
    if y:
        assert (x / y) * y == x
    assert (x * x.conjugate()).is_rational


# --- toric periods ---------------------------------------------------------


def test_single_class_period(level23):
    S, _, cusp, _ = level23
    f = cusp[0]
    for D in (3, 4):
        pts, emb = torus_points(S, D)
        assert len(pts) == 1
        P = toric_period(f, S, D, characters(class_group(D))[0], measure="tamagawa")
        assert P == pytest.approx(2 * float(f.vector[pts[0]]))


def test_optimal_embedding_lands_in_unit_rich_order(level23):
    S, _, _, _ = level23
    assert S.units[torus_points(S, 4)[0][0]] == 4  # i in the left order
    assert S.units[torus_points(S, 3)[0][0]] == 6  # a cube root of unity


def test_period_conjugate_character(level23):
    S, _, cusp, _ = level23
    for Lam in characters(class_group(31)):
        for f in cusp:
            assert abs(toric_period(f, S, 31, Lam)) == pytest.approx(abs(toric_period(f, S, 31, Lam.conj())), abs=1e-12)


@pytest.mark.parametrize("D", [3, 4])
def test_toric_period_formula_level11(level11, D):
    S, B = level11
    f = next(f for f in quat_eigenforms(B) if not f.eisenstein)
    r = mw_prediction(f, S, D, characters(class_group(D))[0])
    assert r["ratio"] == pytest.approx(1, abs=1e-9)


def test_toric_period_ratio_across_discriminants(level11):
    S, B = level11
    f = next(f for f in quat_eigenforms(B) if not f.eisenstein)
    r3 = mw_prediction(f, S, 3, characters(class_group(3))[0])
    r4 = mw_prediction(f, S, 4, characters(class_group(4))[0])
    measured = r3["period_sq"] / r4["period_sq"]
    predicted = (r3["L_central"] / math.sqrt(3)) / (r4["L_central"] / 2)
    assert measured == pytest.approx(predicted, rel=1e-9)


def test_toric_period_ratio_between_eigenforms(level23):
    S, _, cusp, _ = level23
    f1, f2 = cusp
    for D in (3, 4, 8):
        Lam = characters(class_group(D))[0]
        r1, r2 = mw_prediction(f1, S, D, Lam), mw_prediction(f2, S, D, Lam)
        measured = r1["period_sq"] / r2["period_sq"]
        predicted = (quaternionic_norm(f1, S) * r1["L_central"] / r1["L_adjoint"]) / (
            quaternionic_norm(f2, S) * r2["L_central"] / r2["L_adjoint"])
        assert measured == pytest.approx(predicted, rel=1e-9)


def test_toric_period_formula_nontrivial_character(level23):
    S, _, cusp, _ = level23
    for Lam in characters(class_group(24)):
        assert mw_prediction(cusp[0], S, 24, Lam)["ratio"] == pytest.approx(1, abs=1e-4)


# --- the Yoshida lift ------------------------------------------------------


@pytest.fixture(scope="module")
def inst3(level23):
    S, _, cusp, _ = level23
    return YoshidaInstance(23, S, cusp[0], cusp[1], 3, 0)


def test_instance_validation(level23):
    S, _, cusp, eis = level23
    with pytest.raises(ValueError):
        YoshidaInstance(23, S, cusp[0], cusp[0], 3, 0)
    with pytest.raises(ValueError):
        YoshidaInstance(23, S, cusp[0], cusp[1], 7, 0)  # 23 splits in Q(sqrt -7)
    with pytest.raises(ValueError):
        YoshidaInstance(23, S, cusp[0], eis[0], 3, 0)
    with pytest.raises(NotImplementedError):
        YoshidaInstance(23, S, cusp[0], cusp[1], 3, 0, k1=1)


def test_singular_coefficients_vanish(inst3):
    Y = YoshidaLift(inst3, 12)
    assert all(Y.coefficient((m, 0, 0)) == 0 for m in range(0, 13))
    F = yoshida_coeffs(inst3, 40)
    assert not F.is_zero()


def test_transformation_law(inst3):
    rng = random.Random(5)
    Y = YoshidaLift(inst3, 40)
    F = yoshida_coeffs(inst3, 40)
    count = 0
    while count < 20:
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c not in (1, -1):
            continue
        for t in ((1, 1, 1), (1, 0, 2), (2, 1, 2), (1, 1, 3)):
            A, B_, C = t
            # eps T eps^t with eps = [[a, b], [c, d]]
            na = A * a * a + B_ * a * b + C * b * b
            nb = 2 * A * a * c + B_ * (a * d + b * c) + 2 * C * b * d
            nc = A * c * c + B_ * c * d + C * d * d
            if max(na, nc) > 40:
                continue
            assert Y.coefficient((na, nb, nc)) == F[t][0]
        count += 1


@pytest.mark.parametrize("q", [2, 3, 5])
def test_hecke_eigenvalues_factor(inst3, q):
    r = spinor_check(inst3, q)
    assert r["lambda_q"] == r["a1+a2"]
    assert r["lambda_q2"] == r["predicted_q2"]
    a1, a2 = inst3.f1.eigenvalues[q], inst3.f2.eigenvalues[q]
    spin = spinor_factor_classical(r["lambda_q"], r["lambda_q2"], 2, 0, q)
    prod = [1, -(a1 + a2), a1 * a2 + 2 * q, -q * (a1 + a2), q * q]
    assert all(x == y for x, y in zip(spin, prod))


@pytest.mark.parametrize("D", [3, 4, 8, 24, 31])
def test_bessel_period_is_product_of_toric_periods(level23, D):
    S, _, cusp, _ = level23
    G = class_group(D)
    for Lam in characters(G):
        inst = YoshidaInstance(23, S, cusp[0], cusp[1], D, Lam.index)
        Bc = bessel_scalar(bessel_vector(yoshida_coeffs(inst, max(D, 8)), G, Lam))
        P = toric_period(cusp[0], S, D, Lam) * toric_period(cusp[1], S, D, Lam.conj())
        assert Bc == pytest.approx(2 * P, abs=1e-12)


def test_simultaneous_vanishing(level23):
    S, _, cusp, _ = level23
    G = class_group(35)
    Lam = characters(G)[1]  # genus character: the sign condition forces vanishing
    inst = YoshidaInstance(23, S, cusp[0], cusp[1], 35, Lam.index)
    Bc = bessel_scalar(bessel_vector(yoshida_coeffs(inst, 35), G, Lam))
    assert Bc == 0
    assert abs(toric_period(cusp[0], S, 35, Lam)) < 1e-12


@pytest.fixture(scope="module")
def report3(inst3):
    return verify_formula1(inst3)


def test_formula1_sides_nonzero(report3):
    assert report3.lhs > 0 and report3.rhs["completed"] > 0
    assert report3.label == "extrapolated identity (unramified character, m = 0)"


def test_formula1_scaling_invariance(inst3, report3, level23):
    S, _, cusp, _ = level23
    f1 = cusp[0]
    scaled = type(f1)(f1.weight, [3 * x for x in f1.vector], f1.eigenvalues, f1.eisenstein, f1.field_d)
    r = verify_formula1(YoshidaInstance(23, S, scaled, cusp[1], 3, 0))
    assert abs(r.bessel) == pytest.approx(3 * abs(report3.bessel))
    assert r.norms[0] == pytest.approx(9 * report3.norms[0])
    assert r.lhs == pytest.approx(report3.lhs)


def test_formula1_constant_structure(report3):
    # frozen observations: the printed constant is 4x the composition of its constituents,
    # and the theta-pairing normalization gives lhs = 4 rhs (completed L-values)
    assert report3.rhs["completed"] / report3.chain["completed"] == pytest.approx(4, rel=1e-12)
    assert report3.lhs / report3.rhs["completed"] == pytest.approx(4, rel=1e-9)
    assert report3.lhs / report3.rhs["finite"] == pytest.approx(16 * math.pi**2, rel=1e-9)
    assert report3.bessel_over_periods == pytest.approx(2, rel=1e-12)
