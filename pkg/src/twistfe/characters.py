"""Dirichlet characters, Gauss sums, Ramanujan sums and the residue-class
indicator built from them.

A character mod q is stored as an exponent vector on fixed generators of
(Z/qZ)^*, one block per prime power p^e || q (primes ascending):

* odd p: the smallest primitive root mod p^e;
* 2^2: the generator -1;
* 2^e, e >= 3: the pair (-1, 5).

chi(g_i) = e(j_i / ord(g_i)). Characters are listed in lexicographic order of
their exponent vectors (first generator most significant), so index 0 is the
trivial character. The label "q.j" addresses the j-th character mod q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm

import numpy as np

from .arith import (
    I_POWERS,
    GaussianRational,
    NotCoprimeError,
    crt,
    euler_phi,
    factor,
    is_prime,
    kronecker,
    mobius,
)


@dataclass(frozen=True)
class _Block:
    p: int
    e: int
    gens: tuple[int, ...]  # generators lifted to residues mod q
    orders: tuple[int, ...]


@dataclass(frozen=True)
class _GroupData:
    modulus: int
    blocks: tuple[_Block, ...]
    orders: tuple[int, ...]  # flattened generator orders
    exponent: int  # lcm of orders
    units: np.ndarray = field(repr=False, compare=False)
    # dlogs[i, n] = discrete log of n on generator i, -1 when gcd(n, q) > 1
    dlogs: np.ndarray = field(repr=False, compare=False)


def _smallest_primitive_root(p: int, e: int) -> int:
    pe = p**e
    phi = pe // p * (p - 1)
    rs = [r for r, _ in factor(phi)]
    g = 2
    while True:
        if g % p and all(pow(g, phi // r, pe) != 1 for r in rs):
            return g
        g += 1


def _local_tables(p: int, e: int) -> tuple[list[int], list[int], list[np.ndarray]]:
    """Generators, their orders and dlog tables (length p^e) for (Z/p^e)^*."""
    pe = p**e
    if p == 2:
        if e == 1:
            return [], [], []
        if e == 2:
            t = np.full(4, -1, dtype=np.int64)
            t[1], t[3] = 0, 1
            return [3], [2], [t]
        half = pe // 4
        log5 = np.full(pe, -1, dtype=np.int64)
        x = 1
        for i in range(half):
            log5[x] = i
            x = x * 5 % pe
        sign = np.full(pe, -1, dtype=np.int64)
        five = np.full(pe, -1, dtype=np.int64)
        for n in range(1, pe, 2):
            if n % 4 == 1:
                sign[n], five[n] = 0, log5[n]
            else:
                sign[n], five[n] = 1, log5[pe - n]
        return [pe - 1, 5], [2, half], [sign, five]
    g = _smallest_primitive_root(p, e)
    phi = pe // p * (p - 1)
    t = np.full(pe, -1, dtype=np.int64)
    x = 1
    for i in range(phi):
        t[x] = i
        x = x * g % pe
    return [g], [phi], [t]


@lru_cache(maxsize=512)
def _group(q: int) -> _GroupData:
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    fac = factor(q)
    blocks, orders, rows = [], [], []
    residues = np.arange(q)
    for p, e in fac:
        pe = p**e
        others = [(1, pp**ee) for pp, ee in fac if pp != p]
        gens, ords, tables = _local_tables(p, e)
        lifted = tuple(crt([(g, pe)] + others) for g in gens)
        blocks.append(_Block(p, e, lifted, tuple(ords)))
        orders.extend(ords)
        rows.extend(t[residues % pe] for t in tables)
    units = np.gcd(residues, q) == 1
    if rows:
        dlogs = np.vstack(rows)
        dlogs[:, ~units] = -1
    else:
        dlogs = np.zeros((0, q), dtype=np.int64)
    exponent = lcm(*orders) if orders else 1
    return _GroupData(q, tuple(blocks), tuple(orders), exponent, units, dlogs)


class DirichletCharacter:
    """Immutable Dirichlet character mod ``modulus`` given by generator exponents."""

    def __init__(self, modulus: int, exponents=None):
        g = _group(modulus)
        if exponents is None:
            exponents = (0,) * len(g.orders)
        if len(exponents) != len(g.orders):
            raise ValueError(f"mod {modulus} needs {len(g.orders)} exponents")
        exponents = tuple(int(j) % o for j, o in zip(exponents, g.orders))
        self.modulus = modulus
        self.exponents = exponents

    # -- structure --------------------------------------------------------
    @property
    def _g(self) -> _GroupData:
        return _group(self.modulus)

    @cached_property
    def order(self) -> int:
        return lcm(1, *(o // gcd(j, o) for j, o in zip(self.exponents, self._g.orders)))

    @cached_property
    def _log_table(self) -> np.ndarray:
        """Residue n -> t with chi(n) = exp(2 pi i t / order), or -1 off the units."""
        g = self._g
        L = g.exponent
        t = np.zeros(self.modulus, dtype=np.int64)
        for j, o, row in zip(self.exponents, g.orders, g.dlogs):
            if j:
                t = (t + (j * (L // o)) * row) % L
        t = t // (L // self.order)
        t[~g.units] = -1
        return t

    @cached_property
    def value_table(self) -> np.ndarray:
        t = self._log_table
        vals = np.exp(2j * np.pi * t / self.order)
        vals[t < 0] = 0
        # values that are exactly +-1 or +-i are stored exactly
        quarter = (t >= 0) & ((4 * t) % self.order == 0)
        exact = np.array([1, 1j, -1, -1j])
        vals[quarter] = exact[((4 * t[quarter]) // self.order) % 4]
        return vals

    @property
    def index(self) -> int:
        j = 0
        for e, o in zip(self.exponents, self._g.orders):
            j = j * o + e
        return j

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    # -- evaluation -------------------------------------------------------
    def log(self, n: int) -> Fraction | None:
        """Fraction x in [0, 1) with chi(n) = e(x), or None when gcd(n, q) > 1."""
        t = int(self._log_table[n % self.modulus])
        return None if t < 0 else Fraction(t, self.order)

    def __call__(self, n: int) -> complex:
        return complex(self.value_table[n % self.modulus])

    eval = __call__

    def exact(self, n: int) -> GaussianRational:
        """chi(n) in Z[i]; only available for characters of order dividing 4."""
        if 4 % self.order:
            raise ValueError(f"character {self.label} of order {self.order} has no value in Z[i]")
        t = int(self._log_table[n % self.modulus])
        if t < 0:
            return GaussianRational(0, 0)
        return I_POWERS[t * (4 // self.order) % 4]

    @property
    def has_exact_values(self) -> bool:
        return 4 % self.order == 0

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        return 1 if self.modulus == 1 or self._log_table[self.modulus - 1] == 0 else -1

    def is_even(self) -> bool:
        return self.parity() == 1

    # -- group operations -------------------------------------------------
    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-j for j in self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if other.modulus == self.modulus:
            return DirichletCharacter(self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents)))
        M = lcm(self.modulus, other.modulus)
        return self.induce(M) * other.induce(M)

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(k * j for j in self.exponents))

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter({self.label})"

    # -- conductor ---------------------------------------------------------
    @cached_property
    def conductor(self) -> int:
        f = 1
        it = iter(self.exponents)
        for b in self._g.blocks:
            js = [next(it) for _ in b.orders]
            if b.p == 2:
                if b.e == 2:
                    f *= 4 if js[0] else 1
                elif b.e >= 3:
                    o5 = b.orders[1] // gcd(js[1], b.orders[1])
                    if o5 > 1:
                        f *= 2 ** (o5.bit_length() - 1 + 2)
                    elif js[0]:
                        f *= 4
            else:
                o = b.orders[0] // gcd(js[0], b.orders[0])
                if o > 1:
                    v = 0
                    while o % b.p == 0:
                        o //= b.p
                        v += 1
                    f *= b.p ** (v + 1)
        return f

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitivize(self) -> "DirichletCharacter":
        f = self.conductor
        q = self.modulus

        def lifted_log(n: int) -> Fraction:
            # any lift of n mod f that is a unit mod q
            while gcd(n, q) != 1:
                n += f
            return self.log(n)

        return from_log(f, lifted_log)

    def induce(self, M: int) -> "DirichletCharacter":
        """The character mod M (a multiple of the modulus) induced by this one."""
        if M % self.modulus:
            raise ValueError(f"{M} is not a multiple of {self.modulus}")
        return from_log(M, self.log)


def from_log(modulus: int, log_fn) -> DirichletCharacter:
    """Build the character mod ``modulus`` whose value at a unit n is e(log_fn(n))."""
    g = _group(modulus)
    exps = []
    for b in g.blocks:
        for gen, o in zip(b.gens, b.orders):
            x = log_fn(gen)
            if x is None:
                raise ValueError(f"log function vanishes at unit {gen} mod {modulus}")
            j = Fraction(x) * o
            if j.denominator != 1:
                raise ValueError(f"value at generator {gen} is not an {o}-th root of unity")
            exps.append(int(j) % o)
    chi = DirichletCharacter(modulus, tuple(exps))
    return chi


@lru_cache(maxsize=256)
def enumerate_characters(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) characters mod q in canonical order (index 0 trivial)."""
    g = _group(q)
    out = []
    for j in range(euler_phi(q)):
        exps = []
        for o in reversed(g.orders):
            exps.append(j % o)
            j //= o
        out.append(DirichletCharacter(q, tuple(reversed(exps))))
    return tuple(out)


def trivial_character(q: int = 1) -> DirichletCharacter:
    return DirichletCharacter(q)


def character_from_label(label: str) -> DirichletCharacter:
    """Parse "q.j" into the j-th character mod q."""
    try:
        q_str, j_str = label.strip().split(".")
        q, j = int(q_str), int(j_str)
    except ValueError:
        raise ValueError(f"bad character label {label!r}, expected 'q.j'") from None
    if q < 1:
        raise ValueError(f"bad modulus in label {label!r}")
    chars = enumerate_characters(q)
    if not 0 <= j < len(chars):
        raise ValueError(f"index {j} out of range for modulus {q} ({len(chars)} characters)")
    return chars[j]


def kronecker_character(D: int, modulus: int) -> DirichletCharacter:
    """The character n -> (D/n) as a character mod ``modulus``."""
    return from_log(modulus, lambda n: Fraction(0) if kronecker(D, n) == 1 else Fraction(1, 2))


def quadratic_character(q: int) -> DirichletCharacter:
    """The unique character of order 2 mod an odd prime q."""
    if not is_prime(q) or q == 2:
        raise ValueError("quadratic_character expects an odd prime")
    return next(c for c in enumerate_characters(q) if c.order == 2)


def gauss_sum(chi: DirichletCharacter) -> complex:
    q = chi.modulus
    a = np.arange(q)
    return complex(np.sum(chi.value_table * np.exp(2j * np.pi * a / q)))


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n) via Hoelder's closed form mu(q/g) phi(q) / phi(q/g), g = gcd(q, n)."""
    if q < 1:
        raise ValueError("q must be positive")
    g = gcd(q, n)
    return mobius(q // g) * euler_phi(q) // euler_phi(q // g)


def indicator_decomposition(q: int, a: int, n: int) -> complex:
    """1/q - c_q(n)/(q(q-1)) + (1/(q-1)) sum_{chi != chi_0} conj(chi(a)) chi(n).

    Equals 1 if n = a (mod q) and 0 otherwise, for prime q and a prime to q.
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if gcd(a, q) != 1:
        raise NotCoprimeError(f"a={a} is not coprime to q={q}")
    total = 1 / q - ramanujan_sum(q, n) / (q * (q - 1))
    s = sum(chi(a).conjugate() * chi(n) for chi in enumerate_characters(q)[1:])
    return total + s / (q - 1)


def character_product_modulus(chi1: DirichletCharacter, chi2: DirichletCharacter, modulus: int) -> DirichletCharacter:
    """The character mod ``modulus`` induced by chi1 * chi2."""
    if modulus % chi1.modulus or modulus % chi2.modulus:
        raise ValueError("modulus must be a multiple of both moduli")

    def log(n):
        a, b = chi1.log(n), chi2.log(n)
        return (a + b) % 1

    return from_log(modulus, log)


__all__ = [
    "DirichletCharacter",
    "character_from_label",
    "character_product_modulus",
    "enumerate_characters",
    "from_log",
    "gauss_sum",
    "indicator_decomposition",
    "kronecker_character",
    "quadratic_character",
    "ramanujan_sum",
    "trivial_character",
]
