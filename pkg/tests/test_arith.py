from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, strategies as st

from twistfe.arith import (
    GaussianRational,
    NotCoprimeError,
    crt,
    divisors,
    euler_phi,
    factor,
    is_prime,
    is_squarefree,
    kronecker,
    mobius,
    mod_inverse,
    primes_coprime_to,
    primes_up_to,
)


def test_factor_examples():
    assert factor(12) == ((2, 2), (3, 1))
    assert factor(1) == ()
    assert factor(97) == ((97, 1),)


@pytest.mark.parametrize("bad", [0, -3])
def test_factor_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        factor(bad)


def test_factor_rejects_non_int():
    with pytest.raises(TypeError):
        factor(2.0)


@given(st.integers(min_value=1, max_value=10**7))
def test_factor_matches_sympy(n):
    f = factor(n)
    assert prod(p**e for p, e in f) == n
    assert [p for p, _ in f] == sorted(p for p, _ in f)
    assert dict(f) == sympy.factorint(n)


def test_divisors_examples():
    assert divisors(6) == [1, 2, 3, 6]
    assert divisors(1) == [1]
    assert divisors(16) == [1, 2, 4, 8, 16]


def test_multiplicative_function_examples():
    assert euler_phi(9) == 6
    assert mobius(12) == 0
    assert mod_inverse(3, 11) == 4


def test_divisor_sum_identities_up_to_10k():
    for n in range(1, 10**4 + 1):
        ds = divisors(n)
        assert sum(euler_phi(d) for d in ds) == n
        assert sum(mobius(d) for d in ds) == (1 if n == 1 else 0)
        assert len(ds) == prod(e + 1 for _, e in factor(n))


def test_against_sympy_small():
    for n in range(1, 2000):
        assert euler_phi(n) == sympy.totient(n)
        assert mobius(n) == sympy.mobius(n)
        assert is_prime(n) == sympy.isprime(n)
        assert is_squarefree(n) == (sympy.mobius(n) != 0)
    assert primes_up_to(1000) == list(sympy.primerange(2, 1001))


def test_mod_inverse_noncoprime():
    with pytest.raises(NotCoprimeError):
        mod_inverse(6, 9)


def test_crt():
    x = crt([(2, 3), (3, 5), (2, 7)])
    assert x == 23
    assert crt([]) == 0
    with pytest.raises(NotCoprimeError):
        crt([(1, 4), (1, 6)])


@given(st.lists(st.integers(min_value=0, max_value=1000), min_size=1, max_size=4))
def test_crt_residues_normalized(rs):
    mods = [3, 5, 7, 11][: len(rs)]
    x = crt(list(zip(rs, mods)))
    assert 0 <= x < prod(mods)
    assert all((x - r) % m == 0 for r, m in zip(rs, mods))


def test_kronecker_against_sympy():
    for D in (-4, -3, 5, 8, -7, 12):
        assert kronecker(D, 1) == 1
        for n in range(3, 200, 2):
            assert kronecker(D, n) == sympy.jacobi_symbol(D % n, n)
    assert kronecker(-4, 2) == 0
    assert kronecker(5, 2) == -1
    assert kronecker(-7, 2) == 1


def test_primes_coprime_to():
    assert primes_coprime_to(11, 4) == [2, 3, 5, 7]
    assert primes_coprime_to(11, 3, residue=1) == [23, 67, 89]


def test_gaussian_rational_field_ops():
    a = GaussianRational(1, 2)
    b = GaussianRational(Fraction(1, 3), -1)
    assert a * b == GaussianRational(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert (a / b) * b == a
    assert a.conjugate() == GaussianRational(1, -2)
    assert a.norm() == 5
    assert complex(a - a) == 0 and (a - a).is_zero()
    assert a + 1 == GaussianRational(2, 2)
    assert hash(GaussianRational(3, 0)) == hash(GaussianRational(Fraction(6, 2), 0))
