"""End-to-end acceptance checks; each test records one PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from siegelbessel.harness import VerificationTask, ingest, upsilon20, verify_boecherer
from siegelbessel.lfun import completed_value, gamma_constants, jp_factor
from siegelbessel.lfun.builders import dirichlet_quadratic, zeta
from siegelbessel.lfun.theta import check_multiplicative_exact
from siegelbessel.quadforms import (
    characters,
    check_group_axioms,
    class_group,
    is_fundamental,
    kronecker,
    orthogonality_matrix,
)
from siegelbessel.siegel.halfint import conj_action, reduced_keys
from siegelbessel.siegel.hecke import eigenvalue, hecke_matrix, maass_check
from siegelbessel.siegel.ring import cusp_space, eisenstein, igusa_cusp_generators, multiply, multiply_bruteforce
from siegelbessel.siegel.satoh import satoh_bracket
from siegelbessel.yoshida import BrandtSystem, find_instance, ideal_classes, quat_eigenforms, verify_formula1


def test_criterion_1_class_groups(record):
    t0 = time.time()
    ok, worst = True, 0.0
    for D in range(3, 2001):
        if not is_fundamental(D):
            continue
        G = class_group(D)
        s = sum(n * kronecker(D, n) for n in range(1, D + 1))
        h_dirichlet = -G.wE * s / (2 * D)
        worst = max(worst, abs(h_dirichlet - round(h_dirichlet)))
        ok &= round(h_dirichlet) == G.h and abs(h_dirichlet - G.h) < 1e-6
        check_group_axioms(G)
        ok &= bool(np.array_equal(orthogonality_matrix(G, characters(G)), G.h * np.eye(G.h, dtype=np.int64)))
    dt = time.time() - t0
    ok &= dt < 30
    record(1, ok, f"fundamental D <= 2000, max distance to integer {worst:.1e}, {dt:.1f} s")
    assert ok


def test_criterion_2_siegel_engine(record):
    t0 = time.time()
    chi10, chi12 = igusa_cusp_generators(100)
    ok = chi10.cusp and chi12.cusp
    ok &= all(F[(m, 0, 0)][0] == 0 for F in (chi10, chi12) for m in range(0, 101))
    E4, E6 = eisenstein(4, 40), eisenstein(6, 40)
    c10 = chi10.truncate(40)
    for F, G in ((E4, E6), (E4, c10), (c10, chi12.truncate(40))):
        P = multiply(F, G)
        ok &= all(P[t][0] == multiply_bruteforce(F, G, t) for t in reduced_keys(40))
    rng = random.Random(2024)
    S = satoh_bracket(eisenstein(4, 40), c10)
    gens = [((1, 1), (0, 1)), ((0, -1), (1, 0)), ((1, 0), (0, -1))]
    keys = reduced_keys(20)
    for _ in range(100):
        eps = ((1, 0), (0, 1))
        for _ in range(rng.randint(1, 6)):
            g = rng.choice(gens)
            eps = tuple(tuple(sum(eps[i][k] * g[k][j] for k in range(2)) for j in range(2)) for i in range(2))
        t = rng.choice(keys)
        u = conj_action(eps, t)
        ok &= chi10[u] == chi10[t] and S[u] == _satoh_direct(E4, c10, u)
    dt = time.time() - t0
    ok &= dt < 300
    record(2, ok, f"singular coefficients 0, products and transformation law exact, {dt:.1f} s at bound 100")
    assert ok


def _satoh_direct(F, G, t):
    k, l = F.weight.k, G.weight.k
    a, b, c = t
    R = 2 * math.isqrt(a * c) + 2 + abs(b)
    s = [Fraction(0)] * 3
    for a1 in range(a + 1):
        for c1 in range(c + 1):
            for b1 in range(-R, R + 1):
                a2, b2, c2 = a - a1, b - b1, c - c1
                if 4 * a1 * c1 < b1 * b1 or 4 * a2 * c2 < b2 * b2:
                    continue
                xy = F[(a1, b1, c1)][0] * G[(a2, b2, c2)][0]
                if xy:
                    s[0] += xy * (k * c2 - l * c1)
                    s[1] += xy * (k * b2 - l * b1)
                    s[2] += xy * (k * a2 - l * a1)
    return tuple(s)


def test_criterion_3_hecke(record):
    basis = cusp_space(20, 144)
    M2, M3 = hecke_matrix(basis, 2), hecke_matrix(basis, 3)
    ok = (M2 * M3 - M3 * M2).is_zero_matrix
    chi10, chi12 = igusa_cusp_generators(60)
    ref = ingest("chi10", offline=True).data.eigenvalues[2][0]
    ok &= eigenvalue(chi10, 2) == ref
    ok &= maass_check(chi10)[0] and maass_check(chi12)[0]
    lift, witness = maass_check(upsilon20(80))
    ok &= (not lift) and witness is not None
    record(3, ok, f"[T(2),T(3)] = 0 on S_20, lambda_2(chi10) = {ref}, non-lift witness {witness}")
    assert ok


def test_criterion_4_gamma_constants(record):
    ok = True
    for k, r in ((2, 0), (10, 0), (4, 1)):
        c_center, c_adj = gamma_constants(k, r)
        pi = sp.pi
        printed_center = 2**4 * (2 * pi) ** (-2 * (k + r)) * sp.gamma(k + r - 1) ** 2 * sp.gamma(r + 1) ** 2
        printed_adj = 2**6 * (2 * pi) ** (-(4 * k + 6 * r + 1)) * sp.gamma(k + 2 * r) * sp.gamma(k - 1) * sp.gamma(
            2 * r + 2) * sp.gamma(2 * k + 2 * r - 2)
        ok &= sp.simplify(c_center - printed_center) == 0 and sp.simplify(c_adj - printed_adj) == 0
    record(4, ok, "symbolic equality at (2,0), (10,0), (4,1)")
    assert ok


def test_criterion_5_jp_table(record):
    ok = True
    for p in (3, 5, 7):
        base = (1 + Fraction(1, p**2)) * (1 + Fraction(1, p))
        for label, m in (("IIIa", 1), ("VIb", 2), ("other", 0)):
            ok &= jp_factor(p, label) == base * m
    record(5, ok, "p in {3,5,7} x {IIIa, VIb, other}")
    assert ok


def _upsilon_depth():
    data = ingest("upsilon20", offline=True).data
    return max(data.eigenvalues)


def _worst_scale_check(rep):
    checks = [v["scale_check"] for v in rep.to_json()["lvalues"].values()]
    return "unresolved" if None in checks else f"{max(checks):.1e}"


def test_criterion_6_boecherer_ratio(record):
    t0 = time.time()
    depth = _upsilon_depth()
    task = VerificationTask("upsilon20", "upsilon20", (20, 0), 1,
                            [((D, 0), (3, 0)) for D in (4, 7, 8, 11)], prime_bound=500, tolerance=0.01)
    rep = verify_boecherer(task)
    ok = depth >= 500 and rep.kind == "identity" and rep.verdict == "pass"
    worst = max(p.discrepancy for p in rep.pairs)
    budget = max(p.error_budget for p in rep.pairs)
    dt = time.time() - t0
    record(6, ok, f"weight 20, D in {{3,4,7,8,11}}, worst discrepancy {worst:.2e}, budget {budget:.1e}, "
                  f"scale check {_worst_scale_check(rep)}, eigenvalues to p = {depth}, {dt:.0f} s")
    assert ok


def test_criterion_7_nontrivial_character(record):
    t0 = time.time()
    depth = _upsilon_depth()
    task = VerificationTask("upsilon20", "upsilon20", (20, 0), 1, [((23, 1), (3, 0))],
                            prime_bound=depth + 1, tolerance=0.05)
    rep = verify_boecherer(task)
    pr = rep.pairs[0]
    ok = depth >= 500 and rep.verdict == "pass"
    limited = "budget-limited, not resolved at this depth; " if pr.discrepancy > task.tolerance else ""
    dt = time.time() - t0
    record(7, ok, f"{limited}D = 23 order-3 character vs D = 3, discrepancy {pr.discrepancy:.2e}, "
                  f"budget {pr.error_budget:.1e}, scale check {_worst_scale_check(rep)}, {dt:.0f} s")
    assert ok


def test_criterion_8_saito_kurokawa_control(record):
    task = VerificationTask("chi12", "chi12", (12, 0), 1, [((23, 1), (3, 0))], prime_bound=500, tolerance=0.05)
    rep = verify_boecherer(task)
    d = rep.pairs[0].discrepancy
    ok = rep.kind == "negative-control" and d > 3 * task.tolerance and rep.verdict == "mismatch-as-expected"
    record(8, ok, f"chi12 flagged as a lift, discrepancy {d:.3g} > {3 * task.tolerance:.2f}")
    assert ok


def _eta_level11(N):
    c = [0] * (N + 1)
    c[1] = 1
    for m in (1, 11):
        for _ in range(2):
            for n in range(1, N // m + 1):
                step = m * n
                for i in range(N, step - 1, -1):
                    c[i] -= c[i - step]
    return c


@pytest.mark.xfail(strict=True, reason="formula 1 ratio is 4 at every tested instance; see the decisions ledger")
def test_criterion_9_yoshida_chain(record):
    t0 = time.time()
    ok_mass = all(ideal_classes(p).mass == Fraction(p - 1, 24) for p in (11, 13, 17, 19, 23))
    forms = quat_eigenforms(BrandtSystem(ideal_classes(11), 60), list(range(1, 51)))
    cusp = [f for f in forms if not f.eisenstein]
    oracle = _eta_level11(50)
    ok_brandt = len(cusp) == 1 and [cusp[0].eigenvalues[n] for n in range(1, 51)] == oracle[1:]
    inst = find_instance(23)
    rep = verify_formula1(inst)
    ok_formula = rep.discrepancy <= 0.05
    dt = time.time() - t0
    ok = ok_mass and ok_brandt and ok_formula and dt < 1800
    record(9, ok, f"mass {'exact' if ok_mass else 'WRONG'}, Brandt vs newform q <= 50 "
                  f"{'match' if ok_brandt else 'MISMATCH'}, formula 1 at p = 23, D = {inst.D}: "
                  f"lhs/rhs = {rep.lhs / rep.rhs[rep.primary]:.6f}, discrepancy {rep.discrepancy:.3f} "
                  f"({rep.label}), {dt:.0f} s")
    assert ok


def test_criterion_10_l_engine(record):
    v = completed_value(dirichlet_quadratic(4), 1.0)
    ok = abs(v.value - math.pi / 4) < 1e-8
    Z = zeta(400)
    resid = max(abs(completed_value(Z, s).completed - completed_value(Z, 1 - s).completed)
                / abs(completed_value(Z, s).completed) for s in (0.3 + 2j, 0.7 + 5j))
    ok &= resid < 1e-8
    count = 0
    for D in range(3, 201):
        if not is_fundamental(D):
            continue
        G = class_group(D)
        for chi in characters(G):
            good, _ = check_multiplicative_exact(G, chi, 10**4)
            ok &= good
            count += 1
    record(10, ok, f"|L(1,chi_-4) - pi/4| = {abs(v.value - math.pi / 4):.1e}, zeta residual {resid:.1e}, "
                   f"AI multiplicative to 10^4 for {count} characters")
    assert ok
