"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import cmath
import math
import random
import time
from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest

from twistfe.arith import GaussianRational, primes_coprime_to, primes_up_to
from twistfe.characters import character_from_label, enumerate_characters, indicator_decomposition
from twistfe.coeffs import check_hecke_relations, twist_coefficients
from twistfe.datasets import EISENSTEIN_PARAMETERS
from twistfe.lfun import (
    DEFAULT_S_GRID,
    DEFAULT_Y_GRID,
    check_Dq_fe,
    eisenstein_L_factorization,
    ratio_Dq,
    recover_epsilon,
    verify_fe,
    verify_ramanujan_twist,
)
from twistfe.modular import (
    balanced_points,
    modularity_check,
    random_gamma0,
    recover_root_numbers,
    sq_report,
    verify_matrix_identities,
    verify_sq_equals_one,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'} {title}: {detail} ({elapsed:.2f}s)")

    return emit


def _random_gaussian(rng, lo=-9, hi=9):
    while True:
        u = GaussianRational(rng.randint(lo, hi), rng.randint(lo, hi))
        if not u.is_zero():
            return u


def test_1_dirichlet_polynomial_fe(report):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    primes = primes_up_to(71)
    assert len(primes) == 20
    exact_ok = numeric_ok = 0
    worst = 0.0
    trials = 0
    for q in primes:
        for _ in range(50):
            # xi = u / conj(u) is unimodular in Q(i); lambda = t u satisfies conj(lambda) = conj(xi) lambda
            u = _random_gaussian(rng)
            xi = u / u.conjugate()
            lam = u * Fraction(rng.randint(-50, 50), rng.randint(1, 20))
            assert lam.conjugate() == xi.conjugate() * lam
            D = ratio_Dq(lam, xi, q)
            trials += 1
            exact_ok += check_Dq_fe(D, q, xi)
            xc = complex(xi)
            for _ in range(5):
                s = complex(rng.uniform(-2, 3), rng.uniform(-15, 15))
                lhs = D(s)
                rhs = xc * cmath.exp((1 - 2 * s) * math.log(q)) * D(1 - s.conjugate()).conjugate()
                err = abs(lhs - rhs) / max(1.0, abs(lhs))
                worst = max(worst, err)
            numeric_ok += worst < 1e-12
    elapsed = time.perf_counter() - t0
    ok = trials == 1000 and exact_ok == trials and numeric_ok == trials and elapsed < 5
    report(1, "D_q functional equation", ok, f"{exact_ok}/{trials} exact, max numeric rel err {worst:.1e}", elapsed)
    assert ok


def test_2_ramanujan_twist_identity(delta, e4, report):
    t0 = time.perf_counter()
    results = []
    for seq, X in ((delta, 1000), (e4, 10000)):
        for q in (3, 5, 7):
            r = verify_ramanujan_twist(seq, q, X=X)
            results.append((seq.k, q, r.X, r.exact, len(r.violations)))
    elapsed = time.perf_counter() - t0
    ok = all(v == 0 and ex for *_, ex, v in results) and [r[2] for r in results] == [1000] * 3 + [10000] * 3 and elapsed < 10
    report(2, "Ramanujan-sum twist identity", ok, f"violations {[r[4] for r in results]} (exact arithmetic)", elapsed)
    assert ok


def test_3_hecke_relations(delta, level11, e4, e1, report):
    t0 = time.perf_counter()
    passes = []
    for seq in (e4.truncate(10000), e1.truncate(10000), delta.truncate(1000), level11.truncate(1000)):
        r = check_hecke_relations(seq)
        passes.append(r.passed and r.exact)
    detected = []
    for seq, n in ((delta.truncate(1000), 4), (level11.truncate(1000), 6), (e4.truncate(1000), 9)):
        vals = seq.values.copy()
        vals[n - 1] += 1
        r = check_hecke_relations(seq.with_values(vals))
        detected.append(bool(r.violations) and len(r.involving(n)) == len(r.violations))
    elapsed = time.perf_counter() - t0
    ok = all(passes) and all(detected) and elapsed < 10
    report(3, "Hecke relations", ok, f"clean {passes}, corruption detected {detected}", elapsed)
    assert ok


def test_4_root_number_recovery(delta, level11, report):
    t0 = time.perf_counter()
    eps, solves = recover_epsilon(delta, DEFAULT_S_GRID, DEFAULT_Y_GRID)
    assert len(solves) == 9
    disp = max(abs(a[-1] - b[-1]) for a, b in combinations(solves, 2))
    delta_ok = abs(eps - 1) < 1e-8 and disp < 1e-7
    s_grid = (0.5, 0.5 + 1j, 1.2)
    eps11, solves11 = recover_epsilon(level11, s_grid, DEFAULT_Y_GRID)
    disp11 = max(abs(a[-1] - b[-1]) for a, b in combinations(solves11, 2))
    l11_ok = abs(abs(eps11) - 1) < 1e-8 and disp11 < 1e-6
    elapsed = time.perf_counter() - t0
    ok = delta_ok and l11_ok and elapsed < 30
    detail = f"Delta |eps-1|={abs(eps - 1):.1e} disp={disp:.1e}; level 11 eps={eps11.real:.10f}{eps11.imag:+.1e}i disp={disp11:.1e}"
    report(4, "root-number recovery", ok, detail, elapsed)
    assert ok


def test_5_twisted_functional_equations(delta, report):
    t0 = time.perf_counter()
    chars = enumerate_characters(5)[1:]
    reports = [verify_fe(twist_coefficients(delta, chi), tol=1e-6) for chi in chars]
    eps = [r.epsilon for r in reports]
    # independent oracle: tau(chi)^2 / 5 from a direct exponential sum
    oracle = [sum(chi(a) * cmath.exp(2j * math.pi * a / 5) for a in range(5)) ** 2 / 5 for chi in chars]
    distinct = all(abs(a - b) > 1e-3 for a, b in combinations(eps, 2))
    ok = (
        all(r.passed for r in reports)
        and all(abs(abs(e) - 1) < 1e-6 for e in eps)
        and distinct
        and all(abs(e - o) < 1e-6 for e, o in zip(eps, oracle))
    )
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60
    shown = ", ".join(f"{chi.label}:{e.real:+.6f}{e.imag:+.6f}i" for chi, e in zip(chars, eps))
    report(5, "twisted FE mod 5", ok, f"{len(eps)} nontrivial characters, distinct={distinct}, eps {shown}", elapsed)
    assert ok


def test_6_sq_equals_one(delta, level11, report):
    t0 = time.perf_counter()
    r5 = verify_sq_equals_one(delta, 5, tol=1e-6)
    r3 = verify_sq_equals_one(level11, 3, tol=1e-5)
    eps1, eps = recover_root_numbers(delta, 5)
    flipped = []
    for label in eps:
        bad = dict(eps)
        bad[label] = -bad[label]
        flipped.append(sq_report(delta, 5, eps1, bad, tol=1e-6).max_deviation)
    elapsed = time.perf_counter() - t0
    ok = r5.passed and r3.passed and min(flipped) > 0.1 and elapsed < 120
    detail = f"Delta q=5 dev {r5.max_deviation:.1e}, level 11 q=3 dev {r3.max_deviation:.1e}, sign-flip devs min {min(flipped):.2f}"
    report(6, "S_q(x) = 1", ok, detail, elapsed)
    assert ok


def test_7_matrix_identities(report):
    t0 = time.perf_counter()
    counts = {}
    ok = True
    for N in (1, 4, 11, 23):
        qs = primes_coprime_to(N, 10)
        q1 = primes_coprime_to(N, 10, residue=1) if N > 1 else qs
        r = verify_matrix_identities(N, qs, q1)
        kinds = {c.name for c in r.checks}
        ok = ok and r.passed and len(kinds) == 4
        counts[N] = len(r.checks)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 1
    report(7, "matrix identities", ok, f"exact checks per level {counts}", elapsed)
    assert ok


def test_8_modularity(delta, level11, report):
    t0 = time.perf_counter()
    rng = random.Random(7)
    worst = {}
    ok = True
    for name, seq in (("Delta", delta), ("level 11", level11)):
        w = 0.0
        for _ in range(5):
            g = random_gamma0(seq.N, rng)
            assert g.det == 1 and g.c != 0
            r = modularity_check(seq, g, balanced_points(g, 3, rng), tol=1e-7)
            ok = ok and r.passed
            w = max(w, r.max_residual)
        worst[name] = w
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 30
    report(8, "modularity", ok, ", ".join(f"{k} max residual {v:.1e}" for k, v in worst.items()), elapsed)
    assert ok


def test_9_indicator_decomposition(report):
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for q in (3, 5, 7, 11):
        for a in range(1, q):
            if gcd(a, q) != 1:
                continue
            for n in range(1, 201):
                v = indicator_decomposition(q, a, n)
                worst = max(worst, abs(v - (1 if (n - a) % q == 0 else 0)))
                count += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12
    report(9, "indicator decomposition", ok, f"{count} cases, max error {worst:.1e}", elapsed)
    assert ok


def test_10_eisenstein_factorization(report):
    t0 = time.perf_counter()
    results = {}
    for name, (xi1, xi2, k) in EISENSTEIN_PARAMETERS.items():
        r = eisenstein_L_factorization(character_from_label(xi1), character_from_label(xi2), k, 500)
        results[name] = (r.exact, len(r.mismatches))
    elapsed = time.perf_counter() - t0
    ok = all(ex and m == 0 for ex, m in results.values())
    report(10, "Eisenstein L-factorization", ok, f"(exact, mismatches) {results}", elapsed)
    assert ok
