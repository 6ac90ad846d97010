import cmath
import math
import random

import mpmath
import pytest

from twistfe.special import PoleError, complex_gamma, complex_loggamma, gamma_C, upper_incomplete_gamma


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_gamma_examples():
    assert rel(complex_gamma(5), 24) < 1e-13
    assert rel(complex_gamma(0.5), math.sqrt(math.pi)) < 1e-13
    g = complex_gamma(1 + 1j)
    assert rel(abs(g) ** 2, math.pi / math.sinh(math.pi)) < 1e-12


@pytest.mark.parametrize("s", [0, -1, -7])
def test_gamma_poles(s):
    with pytest.raises(PoleError):
        complex_gamma(s)


def test_gamma_against_mpmath():
    rng = random.Random(1)
    for _ in range(400):
        s = complex(rng.uniform(-15, 30), rng.uniform(-20, 20))
        ref = complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))
        assert rel(complex_gamma(s), ref) < 1e-12


def test_gamma_recurrence():
    rng = random.Random(2)
    for _ in range(300):
        s = complex(rng.uniform(-10, 20), rng.uniform(-20, 20))
        assert rel(complex_gamma(s + 1), s * complex_gamma(s)) < 1e-11


def test_loggamma_exponentiates_to_gamma():
    for s in (0.3 + 4j, -2.5 + 0.1j, 12 - 3j):
        assert rel(cmath.exp(complex_loggamma(s)), complex(mpmath.gamma(s))) < 1e-12


def test_gamma_C_examples():
    assert rel(gamma_C(1), 1 / math.pi) < 1e-14
    assert rel(gamma_C(2), 1 / (2 * math.pi**2)) < 1e-14
    assert rel(gamma_C(0.5), math.sqrt(2)) < 1e-14


def test_incomplete_gamma_examples():
    for x in (0.1, 1.0, 7.5):
        assert rel(upper_incomplete_gamma(1, x), math.exp(-x)) < 1e-13
    assert rel(upper_incomplete_gamma(2, 1e-8), 1.0) < 1e-12
    assert rel(upper_incomplete_gamma(2, 1.0), 2 / math.e) < 1e-13


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_incomplete_gamma_rejects_nonpositive_x(x):
    with pytest.raises(ValueError):
        upper_incomplete_gamma(2, x)


def test_incomplete_gamma_against_mpmath():
    rng = random.Random(3)
    for _ in range(300):
        w = complex(rng.uniform(-10, 20), rng.uniform(-15, 15))
        x = 10 ** rng.uniform(-3, 2)
        ref = complex(mpmath.gammainc(mpmath.mpc(w.real, w.imag), x))
        assert rel(upper_incomplete_gamma(w, x), ref) < 1e-11, (w, x)


def test_incomplete_gamma_nonpositive_integer_order():
    for m in (0, 1, 3):
        for x in (0.01, 0.5, 3.0):
            ref = float(mpmath.gammainc(-m, x))
            assert rel(upper_incomplete_gamma(-m, x), ref) < 1e-11


def test_incomplete_gamma_recurrence_grid():
    for base in range(1, 11):
        for shift in (0, 1j, -1j):
            w = base + shift
            for x in (0.1, 1.0, 10.0):
                lhs = upper_incomplete_gamma(w + 1, x)
                rhs = w * upper_incomplete_gamma(w, x) + cmath.exp(w * math.log(x) - x)
                assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_incomplete_gamma_monotone_in_x():
    for w in (0.5, 2.0, 6.5):
        xs = [0.05 * 1.3**j for j in range(25)]
        vals = [upper_incomplete_gamma(w, x).real for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))
