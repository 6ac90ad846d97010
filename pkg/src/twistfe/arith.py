"""Exact integer arithmetic: factorization, divisors, multiplicative functions,
modular inverses, CRT, and a small exact Gaussian-rational number type.

Everything here is trial-division scale (inputs up to ~10**7).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, prod
from numbers import Rational


class NotCoprimeError(ValueError):
    """Raised when an operation needs coprime inputs and did not get them."""


Factorization = tuple[tuple[int, int], ...]


def _check_positive(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


@lru_cache(maxsize=4096)
def factor(n: int) -> Factorization:
    """Return ((p1, e1), (p2, e2), ...) with p1 < p2 < ... and prod p**e == n."""
    _check_positive(n)
    out = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    for p in range(5, isqrt(n) + 1, 6):
        if n % p == 0 or n % (p + 2) == 0:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_coprime_to(N: int, count: int, start: int = 2, residue: int | None = None) -> list[int]:
    """First ``count`` primes >= start not dividing N (optionally p = residue mod N)."""
    out = []
    p = max(start, 2)
    while len(out) < count:
        if is_prime(p) and N % p != 0 and (residue is None or (p - residue) % N == 0):
            out.append(p)
        p += 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    return prod(p ** (e - 1) * (p - 1) for p, e in factor(n))


def mobius(n: int) -> int:
    f = factor(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(n))


def mod_inverse(a: int, n: int) -> int:
    _check_positive(n)
    if gcd(a, n) != 1:
        raise NotCoprimeError(f"{a} is not invertible modulo {n}")
    return pow(a, -1, n) if n > 1 else 0


def crt(pairs: list[tuple[int, int]]) -> int:
    """Solve x = r_i (mod m_i) for pairwise coprime m_i; result in [0, prod m_i)."""
    x, M = 0, 1
    for r, m in pairs:
        _check_positive(m)
        if gcd(M, m) != 1:
            raise NotCoprimeError(f"moduli {M} and {m} are not coprime")
        # x + M*t = r (mod m)
        t = ((r - x) * mod_inverse(M % m, m)) % m if m > 1 else 0
        x += M * t
        M *= m
    return x % M


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    _check_positive(n)
    result = 1
    for p, e in factor(n):
        if p == 2:
            if D % 2 == 0:
                return 0
            s = 1 if D % 8 in (1, 7) else -1
        else:
            r = D % p
            if r == 0:
                return 0
            s = 1 if pow(r, (p - 1) // 2, p) == 1 else -1
        result *= s**e
    return result


class GaussianRational:
    """Exact element of Q(i); components are ints or Fractions.

    Used wherever an identity must be checked with no tolerance at all.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if not isinstance(re, Rational) or not isinstance(im, Rational):
            raise TypeError("GaussianRational needs rational components")
        self.re = re
        self.im = im

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return cls(x, 0)
        raise TypeError(f"cannot convert {type(x).__name__} exactly")

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(Fraction(num.re) / n, Fraction(num.im) / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


# Powers of i as exact Gaussian integers, indexed by exponent mod 4.
I_POWERS = (
    GaussianRational(1, 0),
    GaussianRational(0, 1),
    GaussianRational(-1, 0),
    GaussianRational(0, -1),
)
