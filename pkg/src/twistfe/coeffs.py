"""Hecke coefficient sequences: Eisenstein and eta-product builders, Hecke
relation checks, twisting, and the plain-text coefficient file format.

Values are stored in the arithmetic normalization a_n = lambda_n n^{(k-1)/2};
the analytic lambda_n are derived on demand. When every a_n lies in Z[i] an
exact copy is kept alongside the float array so that identities can be
checked with no tolerance.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, lcm, prod
from pathlib import Path

import numpy as np

from .arith import GaussianRational, divisors, is_squarefree, primes_up_to
from .characters import (
    DirichletCharacter,
    character_from_label,
    character_product_modulus,
    kronecker_character,
    trivial_character,
)


class EisensteinInputError(ValueError):
    """Base class for rejected Eisenstein character data."""


class ParityError(EisensteinInputError):
    """xi1(-1) xi2(-1) != (-1)^k."""


class ConductorConditionError(EisensteinInputError):
    """Primitivity / conductor conditions on (xi1, xi2) violated."""


class OddFirstCharacterError(EisensteinInputError):
    """k = 1 needs xi1 even."""


class CoefficientFileError(ValueError):
    """Base class for malformed coefficient files."""


class MalformedHeaderError(CoefficientFileError):
    pass


class NonMonotoneIndexError(CoefficientFileError):
    pass


class MissingFirstCoefficientError(CoefficientFileError):
    pass


class NotNormalizedError(CoefficientFileError):
    pass


def _growth_constant(values: np.ndarray, k: int) -> float:
    n = np.arange(1, len(values) + 1)
    return float(np.max(np.abs(values) / n ** (k / 2)))


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """a_1..a_X of a weight-k, level-N sequence with nebentypus xi (mod N)."""

    k: int
    N: int
    nebentypus: DirichletCharacter
    values: np.ndarray = field(repr=False)
    exact: tuple[GaussianRational, ...] | None = field(default=None, repr=False)
    C: float | None = None
    origin: str = "file"
    twist: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if len(values) < 1:
            raise ValueError("empty coefficient sequence")
        if self.nebentypus.modulus != self.N:
            raise ValueError(f"nebentypus modulus {self.nebentypus.modulus} != level {self.N}")
        if values[0] != 1:
            raise NotNormalizedError(f"a_1 = {values[0]}, sequence is not normalized")
        if self.nebentypus.parity() != (-1) ** self.k:
            raise ParityError(f"xi(-1) = {self.nebentypus.parity()} but k = {self.k}")
        if self.exact is not None and len(self.exact) != len(values):
            raise ValueError("exact and float values differ in length")
        if self.C is None:
            object.__setattr__(self, "C", _growth_constant(values, self.k))

    @property
    def X(self) -> int:
        return len(self.values)

    def a(self, n: int) -> complex:
        return complex(self.values[n - 1])

    @property
    def lambdas(self) -> np.ndarray:
        n = np.arange(1, self.X + 1)
        return self.values / n ** ((self.k - 1) / 2)

    def lam(self, n: int) -> complex:
        return complex(self.values[n - 1]) / n ** ((self.k - 1) / 2)

    def truncate(self, X: int) -> "CoefficientSequence":
        return replace(
            self,
            values=self.values[:X],
            exact=None if self.exact is None else self.exact[:X],
            C=None,
        )

    def with_values(self, values, exact=None, **kw) -> "CoefficientSequence":
        """Copy with new values; growth constant recomputed from data."""
        return replace(self, values=np.asarray(values, dtype=complex), exact=exact, C=None, **kw)

    def __repr__(self):
        tw = f", twist={self.twist}" if self.twist else ""
        return f"CoefficientSequence(k={self.k}, N={self.N}, xi={self.nebentypus.label}, X={self.X}, origin={self.origin}{tw})"


def _exact_to_complex(exact) -> np.ndarray:
    return np.array([complex(v) for v in exact], dtype=complex)


def _sequence_from_exact(exact, **kw) -> CoefficientSequence:
    exact = tuple(GaussianRational.coerce(v) for v in exact)
    return CoefficientSequence(values=_exact_to_complex(exact), exact=exact, **kw)


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------


def validate_eisenstein_input(xi1: DirichletCharacter, xi2: DirichletCharacter, k: int) -> None:
    if k < 1:
        raise ValueError("weight must be positive")
    if xi1.parity() * xi2.parity() != (-1) ** k:
        raise ParityError(f"xi1(-1) xi2(-1) = {xi1.parity() * xi2.parity()} != (-1)^{k}")
    if k == 1 and not xi1.is_even():
        raise OddFirstCharacterError("weight 1 needs xi1 even")
    if not xi1.is_primitive():
        raise ConductorConditionError(f"xi1 = {xi1.label} must be primitive")
    if k != 2:
        if not xi2.is_primitive():
            raise ConductorConditionError(f"xi2 = {xi2.label} must be primitive when k != 2")
        return
    if xi1.is_trivial() and xi2.is_trivial() and xi2.is_primitive():
        raise ConductorConditionError("k = 2 with both characters trivial mod 1 is not modular; use an imprimitive xi2")
    f2 = xi2.conductor
    ratio = xi2.modulus // f2
    if not is_squarefree(ratio) or gcd(ratio, f2) != 1:
        raise ConductorConditionError(
            f"k = 2 needs N2/N2* squarefree and coprime to N2*, got N2={xi2.modulus}, N2*={f2}"
        )


def eisenstein_coefficients(xi1: DirichletCharacter, xi2: DirichletCharacter, k: int, X: int) -> CoefficientSequence:
    """f_n = sum_{d | n} xi1(n/d) xi2(d) d^{k-1} for n = 1..X."""
    validate_eisenstein_input(xi1, xi2, k)
    N = xi1.modulus * xi2.modulus
    neb = character_product_modulus(xi1, xi2, N)
    common = dict(k=k, N=N, nebentypus=neb, origin="eisenstein")
    if xi1.has_exact_values and xi2.has_exact_values:
        out = []
        for n in range(1, X + 1):
            re_, im_ = 0, 0
            for d in divisors(n):
                u, v = xi1.exact(n // d), xi2.exact(d)
                if u.is_zero() or v.is_zero():
                    continue
                w = u * v
                p = d ** (k - 1)
                re_ += w.re * p
                im_ += w.im * p
            out.append(GaussianRational(re_, im_))
        return _sequence_from_exact(out, **common)
    vals = np.zeros(X, dtype=complex)
    for n in range(1, X + 1):
        vals[n - 1] = sum(xi1(n // d) * xi2(d) * d ** (k - 1) for d in divisors(n))
    return CoefficientSequence(values=vals, **common)


# ---------------------------------------------------------------------------
# Eta products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaExpansion:
    """coeffs[n] is the coefficient of q^n, n = 0..X (zero below ``offset``)."""

    factors: tuple[tuple[int, int], ...]
    weight: int
    offset: int
    coeffs: tuple[int, ...]


def parse_eta_spec(spec) -> tuple[tuple[int, int], ...]:
    """Accept "1^2*11^2" or [(1, 2), (11, 2)]."""
    if isinstance(spec, str):
        out = []
        for part in spec.replace(" ", "").split("*"):
            m = re.fullmatch(r"(\d+)\^(\d+)", part)
            if not m:
                raise ValueError(f"bad eta factor {part!r} in {spec!r}")
            out.append((int(m.group(1)), int(m.group(2))))
        return tuple(out)
    return tuple((int(d), int(r)) for d, r in spec)


def _euler_product_sparse(d: int, T: int) -> list[tuple[int, int]]:
    """prod_{m>=1} (1 - q^{dm}) up to q^T, via pentagonal numbers: (exponent, sign)."""
    terms = [(0, 1)]
    j = 1
    while True:
        e1 = d * j * (3 * j - 1) // 2
        if e1 > T:
            break
        s = -1 if j % 2 else 1
        terms.append((e1, s))
        e2 = d * j * (3 * j + 1) // 2
        if e2 <= T:
            terms.append((e2, s))
        j += 1
    return terms


def eta_product_expansion(spec, X: int) -> EtaExpansion:
    """Exact q-expansion of prod eta(d z)^r up to q^X."""
    factors = parse_eta_spec(spec)
    if not factors:
        raise ValueError("empty eta spec")
    if any(d < 1 or r < 1 for d, r in factors):
        raise ValueError("eta scales and exponents must be positive")
    total = sum(d * r for d, r in factors)
    if total % 24:
        raise ValueError(f"offset sum(d r)/24 = {total}/24 is not an integer")
    if sum(r for _, r in factors) % 2:
        raise ValueError("half-integral weight eta products are not supported")
    offset = total // 24
    weight = sum(r for _, r in factors) // 2
    T = X - offset
    coeffs = np.zeros(max(T, -1) + 1, dtype=object)
    if T >= 0:
        coeffs[0] = 1
        for d, r in factors:
            sparse = _euler_product_sparse(d, T)
            for _ in range(r):
                new = np.zeros(T + 1, dtype=object)
                for e, s in sparse:
                    if s > 0:
                        new[e:] += coeffs[: T + 1 - e]
                    else:
                        new[e:] -= coeffs[: T + 1 - e]
                coeffs = new
    full = [0] * offset + [int(c) for c in coeffs]
    return EtaExpansion(factors, weight, offset, tuple(full[: X + 1]))


def eta_level(factors) -> int:
    """Smallest N with every scale dividing N and 24 | N * sum(r/d)."""
    base = lcm(*(d for d, _ in factors))
    s = sum(Fraction(r, d) for d, r in factors)
    N = base
    while (N * s) % 24:
        N += base
    return N


def eta_sequence(spec, X: int) -> CoefficientSequence:
    """CoefficientSequence a_1..a_X of an eta product with leading term q^1."""
    exp = eta_product_expansion(spec, X)
    if exp.offset != 1:
        raise ValueError(f"eta product starts at q^{exp.offset}; need q^1 for a normalized sequence")
    N = eta_level(exp.factors)
    D = (-1) ** exp.weight * prod(d**r for d, r in exp.factors)
    root = math.isqrt(abs(D))
    if D > 0 and root * root == D:
        neb = trivial_character(N)
    else:
        neb = kronecker_character(D, N)
    return _sequence_from_exact(exp.coeffs[1 : X + 1], k=exp.weight, N=N, nebentypus=neb, origin="eta")


# ---------------------------------------------------------------------------
# Hecke relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "a1" | "multiplicative" | "prime_power" | "self_dual" | "growth"
    indices: tuple[int, ...]
    residual: float


@dataclass
class HeckeReport:
    exact: bool
    tol: float
    checked: dict[str, int]
    violations: list[Violation]

    @property
    def passed(self) -> bool:
        return not self.violations

    def involving(self, n: int) -> list[Violation]:
        return [v for v in self.violations if n in v.indices]


def check_hecke_relations(seq: CoefficientSequence, tol: float = 1e-10) -> HeckeReport:
    """List every violated Euler-product relation among a_1..a_X.

    Relations: a_1 = 1; a_{mn} = a_m a_n for coprime m, n;
    a_{p^{r+1}} = a_p a_{p^r} - xi(p) p^{k-1} a_{p^{r-1}};
    conj(lambda_p) = conj(xi(p)) lambda_p for p not dividing N;
    |lambda_n| <= C sqrt(n).
    Exact comparison is used when the values and xi live in Z[i]; otherwise
    the comparison is in the lambda normalization with relative tolerance ``tol``.
    """
    if seq.X < 4:
        raise ValueError("need at least 4 coefficients")
    X, k, xi = seq.X, seq.k, seq.nebentypus
    exact = seq.exact is not None and xi.has_exact_values
    lam = seq.lambdas
    violations: list[Violation] = []
    checked = {"multiplicative": 0, "prime_power": 0, "self_dual": 0, "growth": 0}

    if exact:
        a = (None,) + seq.exact

        def differs(lhs, rhs, n_norm):
            d = lhs - rhs
            return (not d.is_zero()), abs(complex(d)) / n_norm ** ((k - 1) / 2)

        xi_val = xi.exact
    else:
        a = (None,) + tuple(seq.values)

        def differs(lhs, rhs, n_norm):
            scale = n_norm ** ((k - 1) / 2)
            d = abs(lhs - rhs) / scale
            return d > tol * max(1.0, abs(lhs) / scale, abs(rhs) / scale), d

        xi_val = xi

    if a[1] != 1:
        violations.append(Violation("a1", (1,), abs(complex(a[1]) - 1)))

    for m in range(2, X + 1):
        if m * (m + 1) > X:
            break
        for n in range(m + 1, X // m + 1):
            if gcd(m, n) != 1:
                continue
            checked["multiplicative"] += 1
            bad, r = differs(a[m * n], a[m] * a[n], m * n)
            if bad:
                violations.append(Violation("multiplicative", (m, n, m * n), r))

    for p in primes_up_to(X):
        xp = xi_val(p)
        pk = p ** (k - 1)
        prev, cur, r = 1, p, 1
        while cur * p <= X:
            nxt = cur * p
            checked["prime_power"] += 1
            rhs = a[p] * a[cur] - xp * pk * a[prev]
            bad, res = differs(a[nxt], rhs, nxt)
            if bad:
                violations.append(Violation("prime_power", (nxt, p, cur, prev), res))
            prev, cur, r = cur, nxt, r + 1
        if seq.N % p:
            checked["self_dual"] += 1
            bad, res = differs(xp * a[p].conjugate(), a[p], p)
            if bad:
                violations.append(Violation("self_dual", (p,), res))

    bound = seq.C * np.sqrt(np.arange(1, X + 1)) * (1 + 1e-12)
    over = np.nonzero(np.abs(lam) > bound)[0]
    checked["growth"] = X
    for i in over:
        violations.append(Violation("growth", (int(i) + 1,), float(abs(lam[i]) - bound[i])))

    return HeckeReport(exact=exact, tol=0.0 if exact else tol, checked=checked, violations=violations)


# ---------------------------------------------------------------------------
# Twisting
# ---------------------------------------------------------------------------


def twist_coefficients(seq: CoefficientSequence, chi: DirichletCharacter) -> CoefficientSequence:
    """a_n chi(n), recorded at level N q^2 with nebentypus xi chi^2.

    N is the level before any twist; twisting again by a character of a modulus
    already used leaves the recorded level unchanged.
    """
    q = chi.modulus
    moduli = [int(t.split(".")[0]) for t in seq.twist.split("*")] if seq.twist else []
    base = seq.N // prod(m * m for m in moduli)
    if gcd(q, base) != 1:
        raise ValueError(f"twist modulus {q} is not coprime to level {base}")
    M = seq.N if q in moduli else seq.N * q * q
    neb = character_product_modulus(seq.nebentypus, chi * chi, M)
    tag = chi.label if not seq.twist else f"{seq.twist}*{chi.label}"
    if seq.exact is not None and chi.has_exact_values:
        exact = tuple(v * chi.exact(n) for n, v in enumerate(seq.exact, start=1))
        return replace(seq, N=M, nebentypus=neb, values=_exact_to_complex(exact), exact=exact, C=None, twist=tag)
    vals = seq.values * chi.value_table[np.arange(1, seq.X + 1) % q]
    return replace(seq, N=M, nebentypus=neb, values=vals, exact=None, C=None, twist=tag)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

_HEADER = re.compile(
    r"#\s*k=(?P<k>-?\d+)\s+N=(?P<N>\d+)\s+chi=(?P<chi>\d+\.\d+)\s+X=(?P<X>\d+)\s+C=(?P<C>\S+)\s*$"
)


def _fmt_number(v: float) -> str:
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(float(v))


def _fmt_exact(v) -> str:
    if isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1):
        return str(int(v))
    return repr(float(v))


def dumps_coefficients(seq: CoefficientSequence) -> str:
    out = io.StringIO()
    out.write(f"# k={seq.k} N={seq.N} chi={seq.nebentypus.label} X={seq.X} C={seq.C!r}\n")
    if seq.exact is not None:
        for n, v in enumerate(seq.exact, start=1):
            out.write(f"{n} {_fmt_exact(v.re)} {_fmt_exact(v.im)}\n")
    else:
        for n, v in enumerate(seq.values, start=1):
            out.write(f"{n} {_fmt_number(v.real)} {_fmt_number(v.imag)}\n")
    return out.getvalue()


def save_coefficients(seq: CoefficientSequence, sink) -> None:
    text = dumps_coefficients(seq)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text)


def _parse_number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def loads_coefficients(text: str) -> CoefficientSequence:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeaderError("empty coefficient file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise MalformedHeaderError(f"bad header line: {lines[0]!r}")
    k, N, X = int(m["k"]), int(m["N"]), int(m["X"])
    try:
        C = float(m["C"])
        chi = character_from_label(m["chi"])
    except ValueError as exc:
        raise MalformedHeaderError(str(exc)) from None
    if chi.modulus != N:
        raise MalformedHeaderError(f"chi modulus {chi.modulus} != N={N}")
    res, ims = [], []
    expected = 1
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 3:
            raise CoefficientFileError(f"bad data line: {ln!r}")
        try:
            n = int(toks[0])
            re_, im_ = _parse_number(toks[1]), _parse_number(toks[2])
        except ValueError:
            raise CoefficientFileError(f"bad data line: {ln!r}") from None
        if n != expected:
            if expected == 1 and n > 1:
                raise MissingFirstCoefficientError("file does not start with n=1")
            raise NonMonotoneIndexError(f"expected index {expected}, found {n}")
        res.append(re_)
        ims.append(im_)
        expected += 1
    if not res:
        raise MissingFirstCoefficientError("no coefficients in file")
    if len(res) != X:
        raise MalformedHeaderError(f"header says X={X} but file has {len(res)} coefficients")
    if res[0] != 1 or ims[0] != 0:
        raise NotNormalizedError(f"a_1 = {res[0]}+{ims[0]}i, sequence is not normalized")
    common = dict(k=k, N=N, nebentypus=chi, C=C)
    if all(isinstance(v, int) for v in res) and all(isinstance(v, int) for v in ims):
        exact = tuple(GaussianRational(r, i) for r, i in zip(res, ims))
        return CoefficientSequence(values=_exact_to_complex(exact), exact=exact, **common)
    vals = np.array(res, dtype=float) + 1j * np.array(ims, dtype=float)
    return CoefficientSequence(values=vals, **common)


def load_coefficients(source) -> CoefficientSequence:
    if hasattr(source, "read"):
        return loads_coefficients(source.read())
    return loads_coefficients(Path(source).read_text())


__all__ = [
    "CoefficientFileError",
    "CoefficientSequence",
    "ConductorConditionError",
    "EisensteinInputError",
    "EtaExpansion",
    "HeckeReport",
    "MalformedHeaderError",
    "MissingFirstCoefficientError",
    "NonMonotoneIndexError",
    "NotNormalizedError",
    "OddFirstCharacterError",
    "ParityError",
    "Violation",
    "check_hecke_relations",
    "dumps_coefficients",
    "eisenstein_coefficients",
    "eta_level",
    "eta_product_expansion",
    "eta_sequence",
    "load_coefficients",
    "loads_coefficients",
    "parse_eta_spec",
    "save_coefficients",
    "twist_coefficients",
    "validate_eisenstein_input",
]
