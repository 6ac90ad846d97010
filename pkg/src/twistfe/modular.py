"""Exact 2x2 matrix identities, the weight-k slash action on Fourier series,
and the chain root numbers -> C_chi -> C_hat_q -> S_q.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from numbers import Rational

import numpy as np

from .arith import euler_phi, is_prime, mod_inverse
from .characters import DirichletCharacter, enumerate_characters, gauss_sum
from .coeffs import CoefficientSequence, twist_coefficients
from .lfun import DEFAULT_S_GRID, DEFAULT_Y_GRID, InsufficientCoefficientsError, recover_epsilon


@dataclass(frozen=True)
class Matrix2x2:
    """Exact 2x2 matrix (a b; c d) with int or Fraction entries."""

    a: Rational
    b: Rational
    c: Rational
    d: Rational

    @classmethod
    def parse(cls, text: str) -> "Matrix2x2":
        """Parse the literal "a,b;c,d"."""
        try:
            top, bottom = text.split(";")
            a, b = (Fraction(t) for t in top.split(","))
            c, d = (Fraction(t) for t in bottom.split(","))
        except ValueError:
            raise ValueError(f"bad matrix literal {text!r}, expected 'a,b;c,d'") from None
        return cls(a, b, c, d).normalized()

    def normalized(self) -> "Matrix2x2":
        def nz(x):
            x = Fraction(x)
            return int(x) if x.denominator == 1 else x

        return Matrix2x2(nz(self.a), nz(self.b), nz(self.c), nz(self.d))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "Matrix2x2") -> "Matrix2x2":
        return Matrix2x2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        ).normalized()

    def scale(self, t) -> "Matrix2x2":
        return Matrix2x2(t * self.a, t * self.b, t * self.c, t * self.d).normalized()

    def inverse(self) -> "Matrix2x2":
        D = Fraction(self.det)
        if D == 0:
            raise ZeroDivisionError("singular matrix")
        return Matrix2x2(self.d / D, -self.b / D, -self.c / D, self.a / D).normalized()

    def __pow__(self, j: int) -> "Matrix2x2":
        base = self if j >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(j)):
            out = out @ base
        return out

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in (self.a, self.b, self.c, self.d))

    def in_gamma0(self, N: int) -> bool:
        return self.is_integral() and self.det == 1 and self.c % N == 0

    def in_gamma1(self, N: int) -> bool:
        return self.in_gamma0(N) and (self.a - 1) % N == 0 and (self.d - 1) % N == 0

    def act(self, z: complex) -> complex:
        a, b, c, d = (float(x) for x in (self.a, self.b, self.c, self.d))
        return (a * z + b) / (c * z + d)

    def __str__(self):
        return f"{self.a},{self.b};{self.c},{self.d}"


IDENTITY = Matrix2x2(1, 0, 0, 1)

# integer-entry matrices use the same exact type
IntegerMatrix2x2 = Matrix2x2


def T(n: int = 1) -> Matrix2x2:
    return Matrix2x2(1, n, 0, 1)


def lower(N: int) -> Matrix2x2:
    return Matrix2x2(1, 0, N, 1)


def fricke(N: int) -> Matrix2x2:
    return Matrix2x2(0, -1, N, 0)


def translation(x) -> Matrix2x2:
    return Matrix2x2(1, Fraction(x), 0, 1).normalized()


# ---------------------------------------------------------------------------
# Fourier series and the slash action
# ---------------------------------------------------------------------------


def fourier_tail_bound(C: float, k: int, y: float, X: int) -> float:
    """C sum_{n>X} n^{k/2} e^{-2 pi n y}, bounded by a geometric envelope."""
    rho = ((X + 2) / (X + 1)) ** (k / 2) * math.exp(-2 * math.pi * y)
    if rho >= 1:
        return math.inf
    return C * math.exp((k / 2) * math.log(X + 1) - 2 * math.pi * (X + 1) * y) / (1 - rho)


def evaluate_fourier(seq: CoefficientSequence, z: complex, X: int | None = None, tol: float | None = None) -> tuple[complex, float]:
    """sum_{n<=X} a_n e(n z) and a bound on the omitted tail.

    With ``tol`` and no ``X`` the shortest adequate truncation is used.
    """
    y = z.imag
    if y <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if X is None:
        X = seq.X
        if tol is not None:
            lo = 1
            while lo < seq.X and fourier_tail_bound(seq.C, seq.k, y, lo) > tol:
                lo = min(2 * lo, seq.X)
            X = lo
    if X > seq.X:
        raise InsufficientCoefficientsError(X, seq.X)
    bound = fourier_tail_bound(seq.C, seq.k, y, X)
    if tol is not None and bound > tol:
        need = X
        while fourier_tail_bound(seq.C, seq.k, y, need) > tol and need < 10**8:
            need *= 2
        raise InsufficientCoefficientsError(need, seq.X, f"Fourier series at Im z = {y:.3g}")
    n = np.arange(1, X + 1)
    val = complex(np.sum(seq.values[:X] * np.exp(2j * np.pi * n * z)))
    return val, bound


class FourierSeries:
    """Callable z -> f(z) for a coefficient sequence, tracking the worst tail bound."""

    def __init__(self, seq: CoefficientSequence, tol: float = 1e-12, conjugate: bool = False):
        self.seq = seq if not conjugate else _conjugate_sequence(seq)
        self.tol = tol
        self.max_error = 0.0

    def __call__(self, z: complex) -> complex:
        v, b = evaluate_fourier(self.seq, z, tol=self.tol)
        self.max_error = max(self.max_error, b)
        return v


def _conjugate_sequence(seq: CoefficientSequence) -> CoefficientSequence:
    from dataclasses import replace

    exact = None if seq.exact is None else tuple(v.conjugate() for v in seq.exact)
    return replace(seq, values=seq.values.conjugate(), exact=exact, nebentypus=seq.nebentypus.conjugate())


def slash(f, gamma: Matrix2x2, k: int, z: complex) -> complex:
    """(f|gamma)(z) = det^{k/2} (cz+d)^{-k} f(gamma z) for det(gamma) > 0."""
    det = float(gamma.det)
    if det <= 0:
        raise ValueError("slash needs positive determinant")
    cz_d = float(gamma.c) * z + float(gamma.d)
    if cz_d == 0:
        raise ZeroDivisionError("cz + d = 0")
    return det ** (k / 2) * cz_d ** (-k) * f(gamma.act(z))


# ---------------------------------------------------------------------------
# gamma_{q,a} and the integer identities
# ---------------------------------------------------------------------------


def gamma_qa(q: int, a: int, N: int, m: int | None = None) -> Matrix2x2:
    """(q, -a; -N m, (N a m + 1)/q) with N a m = -1 (mod q); m least positive unless given."""
    if gcd(q, N * a) != 1:
        raise ValueError(f"gcd(q, N a) = gcd({q}, {N * a}) != 1")
    if m is None:
        m = (-mod_inverse(N * a % q, q)) % q if q > 1 else 0
        if m == 0:
            m = q
    if (N * a * m + 1) % q:
        raise ValueError(f"m={m} does not solve N a m = -1 mod q")
    return Matrix2x2(q, -a, -N * m, (N * a * m + 1) // q)


@dataclass
class IdentityCheck:
    name: str
    params: tuple
    ok: bool
    detail: str = ""


@dataclass
class MatrixReport:
    N: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.ok]


def lower_power_exponent(g: Matrix2x2, N: int) -> int | None:
    """j if g == (1, 0; N, 1)^j exactly, else None."""
    if not g.is_integral() or (g.a, g.b, g.d) != (1, 0, 1) or g.c % N:
        return None
    return int(g.c) // N


def verify_matrix_identities(N: int, q_list, q1_list=None, rng: random.Random | None = None) -> MatrixReport:
    """Exact checks of the four matrix identities used in the modularity argument.

    (i)   (1,0;N,1) = W_N T^{-1} W_N^{-1}
    (ii)  two elements of Gamma_0(N) with the same top row differ by a power of (1,0;N,1)
    (iii) (q,-1;1-q,1) = T^{-1} (1,0;N,1)^{(1-q)/N} for q = 1 mod N
    (iv)  q W_N T(m/q) W_{Nq^2}^{-1} T(a/q)^{-1} = (q,-a;-Nm,(Nam+1)/q) when Nam = -1 mod q
    """
    rng = rng or random.Random(0)
    rep = MatrixReport(N)
    W = fricke(N)
    lhs = lower(N)
    rhs = W @ T(-1) @ W.inverse()
    rep.checks.append(IdentityCheck("lower_from_fricke", (N,), lhs == rhs, f"{rhs}"))

    for q in q_list:
        if not is_prime(q) or N % q == 0:
            raise ValueError(f"q={q} must be a prime not dividing N={N}")
        for a in range(1, q):
            g = gamma_qa(q, a, N)
            # a second representative with the same top row
            g2 = gamma_qa(q, a, N, m=g.c // -N + q * rng.randint(1, 5))
            ok = g.in_gamma0(N) and g2.in_gamma0(N) and (g.a, g.b) == (q, -a)
            j = lower_power_exponent(g2 @ g.inverse(), N)
            rep.checks.append(IdentityCheck("top_row", (N, q, a), ok and j is not None, f"j={j}"))

            m = -g.c // N
            prod_ = (W @ translation(Fraction(m, q)) @ fricke(N * q * q).inverse() @ translation(Fraction(a, q)).inverse()).scale(q)
            ok = prod_ == g and prod_.is_integral() and prod_.det == 1
            rep.checks.append(IdentityCheck("gamma_qa_product", (N, q, a, m), ok, f"{prod_}"))

    for q in q1_list if q1_list is not None else []:
        if not is_prime(q) or (q - 1) % N:
            raise ValueError(f"q={q} must be a prime = 1 mod N={N}")
        lhs = Matrix2x2(q, -1, 1 - q, 1)
        rhs = T(-1) @ lower(N) ** ((1 - q) // N)
        ok = lhs == rhs and lhs.in_gamma0(N)
        rep.checks.append(IdentityCheck("gamma_q1", (N, q), ok, f"{rhs}"))
    return rep


# ---------------------------------------------------------------------------
# C_chi, C_hat, S_q
# ---------------------------------------------------------------------------


class NonUnimodularError(ValueError):
    pass


def compute_C_chi(chi: DirichletCharacter, xi: DirichletCharacter, eps1: complex, eps_chi: complex | None, N: int, tol: float = 1e-6) -> complex:
    """conj(xi(q)) for trivial chi, else chi(-N) eps1 conj(eps_chi tau(conj chi) / tau(chi))."""
    q = chi.modulus
    if gcd(q, N) != 1:
        raise ValueError(f"q={q} is not coprime to N={N}")
    if abs(abs(eps1) - 1) > tol:
        raise NonUnimodularError(f"|eps_1| = {abs(eps1)}")
    if chi.is_trivial():
        return xi(q).conjugate()
    if eps_chi is None or abs(abs(eps_chi) - 1) > tol:
        raise NonUnimodularError(f"|eps_chi| = {None if eps_chi is None else abs(eps_chi)} for {chi.label}")
    ratio = gauss_sum(chi.conjugate()) / gauss_sum(chi)
    return chi(-N) * eps1 * (eps_chi * ratio).conjugate()


def _check_C_values(q: int, C_values) -> list[complex]:
    vals = list(C_values)
    if len(vals) != euler_phi(q):
        raise ValueError(f"need {euler_phi(q)} C values mod {q}, got {len(vals)}")
    return vals


def c_hat(q: int, a: int, C_values) -> complex:
    """(1/phi(q)) sum_chi C_chi conj(chi(a)), characters in canonical order."""
    if gcd(a, q) != 1:
        raise ValueError(f"a={a} is not a unit mod {q}")
    vals = _check_C_values(q, C_values)
    chars = enumerate_characters(q)
    return sum(C * chi(a).conjugate() for C, chi in zip(vals, chars)) / euler_phi(q)


def s_q(q: int, x: int, C_values) -> complex:
    """sum over units a of C_hat_q(a) e((a-1) x / q)."""
    vals = _check_C_values(q, C_values)
    return sum(c_hat(q, a, vals) * cmath.exp(2j * math.pi * (a - 1) * x / q) for a in range(1, q) if gcd(a, q) == 1) if q > 1 else c_hat(1, 0, vals)


@dataclass
class SqReport:
    q: int
    eps1: complex
    eps_chi: dict[str, complex]
    C_values: list[complex]
    S_values: list[complex]
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(abs(S - 1) for S in self.S_values)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def recover_root_numbers(seq: CoefficientSequence, q: int, s_grid=DEFAULT_S_GRID, y_grid=DEFAULT_Y_GRID, tol: float = 1e-12):
    """eps_1 for seq and eps_chi for each nontrivial chi mod q, all solved for."""
    eps1, _ = recover_epsilon(seq, s_grid, y_grid, tol=tol)
    eps = {}
    for chi in enumerate_characters(q)[1:]:
        try:
            eps[chi.label], _ = recover_epsilon(twist_coefficients(seq, chi), s_grid, y_grid, tol=tol)
        except (ArithmeticError, ValueError) as exc:
            raise type(exc)(f"{chi.label}: {exc}") from exc
    return eps1, eps


def sq_report(seq: CoefficientSequence, q: int, eps1: complex, eps_chi: dict[str, complex], tol: float = 1e-6) -> SqReport:
    chars = enumerate_characters(q)
    C_values = [compute_C_chi(chi, seq.nebentypus, eps1, eps_chi.get(chi.label), seq.N, tol=max(tol, 1e-6)) for chi in chars]
    S_values = [s_q(q, x, C_values) for x in range(q)]
    return SqReport(q, eps1, dict(eps_chi), C_values, S_values, tol)


def verify_sq_equals_one(seq: CoefficientSequence, q: int, s_grid=DEFAULT_S_GRID, y_grid=DEFAULT_Y_GRID, tol: float = 1e-6) -> SqReport:
    """Recover every root number mod q, build C_chi and check S_q(x) = 1 for all x mod q."""
    if not is_prime(q) or seq.N % q == 0:
        raise ValueError(f"q={q} must be a prime not dividing N={seq.N}")
    eps1, eps = recover_root_numbers(seq, q, s_grid, y_grid)
    return sq_report(seq, q, eps1, eps, tol)


# ---------------------------------------------------------------------------
# Modularity
# ---------------------------------------------------------------------------


@dataclass
class ModularityReport:
    gamma: Matrix2x2
    residuals: list[float]
    error_bound: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol + self.error_bound


def modularity_check(seq: CoefficientSequence, gamma: Matrix2x2, z_points, tol: float = 1e-7) -> ModularityReport:
    """max_z |(f|gamma)(z) - conj(xi(a)) f(z)| for gamma = (a, b; c, d) in Gamma_0(N)."""
    if not gamma.in_gamma0(seq.N):
        raise ValueError(f"{gamma} is not in Gamma_0({seq.N})")
    f = FourierSeries(seq, tol=tol / 100)
    chi_bar = seq.nebentypus(int(gamma.a)).conjugate()
    residuals = []
    bound = 0.0
    for z in z_points:
        z = complex(z)
        before = f.max_error
        lhs = slash(f, gamma, seq.k, z)
        w = abs(float(gamma.c) * z + float(gamma.d)) ** (-seq.k)
        rhs = chi_bar * f(z)
        bound = max(bound, w * f.max_error + f.max_error, before)
        residuals.append(abs(lhs - rhs))
    return ModularityReport(gamma, residuals, bound, tol)


def balanced_points(gamma: Matrix2x2, count: int, rng: random.Random, spread: float = 0.3) -> list[complex]:
    """Points with Im z and Im(gamma z) both near the largest possible common height 1/|c|."""
    c, d = float(gamma.c), float(gamma.d)
    if c == 0:
        return [complex(rng.uniform(0, 1), rng.uniform(0.5, 1.5)) for _ in range(count)]
    out = []
    for _ in range(count):
        h = 1 + rng.uniform(-spread, spread)
        out.append(complex(-d / c + rng.uniform(-spread, spread) / abs(c), h / abs(c)))
    return out


def random_gamma0(N: int, rng: random.Random, max_c: int = 3, max_d: int = 12) -> Matrix2x2:
    """Random element of Gamma_0(N) with c != 0."""
    while True:
        c = N * rng.choice([s * m for m in range(1, max_c + 1) for s in (1, -1)])
        d = rng.randint(-max_d, max_d)
        if d == 0 or gcd(c, d) != 1:
            continue
        # a d - b c = 1
        a = mod_inverse(d % abs(c), abs(c)) if abs(c) > 1 else 1
        b = (a * d - 1) // c
        g = Matrix2x2(a, b, c, d)
        if g.det == 1 and g.in_gamma0(N):
            return g


def smallest_representative(gamma: Matrix2x2, N: int) -> Matrix2x2:
    """The element (1,0;N,1)^j gamma with the same top row and the smallest |c|."""
    best = gamma
    for j in range(-abs(int(gamma.c)) // N - 1, abs(int(gamma.c)) // N + 2):
        g = lower(N) ** j @ gamma
        if abs(g.c) < abs(best.c):
            best = g
    return best


def slash_fourier_coefficients(seq: CoefficientSequence, gamma: Matrix2x2, n_max: int = 10, y: float = 0.25, nodes: int = 256, tol: float = 1e-9) -> np.ndarray:
    """Coefficients b_1..b_{n_max} of f|gamma from the trapezoid rule on [0, 1) + iy.

    Each sample is evaluated to an accuracy scaled so that, after the factor
    e^{2 pi n y} of the inverse transform, the coefficients are good to ``tol``.
    """
    k = seq.k
    det = float(gamma.det)
    x = np.arange(nodes) / nodes
    amp = math.exp(2 * math.pi * n_max * y)
    vals = np.empty(nodes, dtype=complex)
    for j, xj in enumerate(x):
        z = complex(xj, y)
        cz_d = float(gamma.c) * z + float(gamma.d)
        local = tol / amp * abs(cz_d) ** k / det ** (k / 2)
        fz, _ = evaluate_fourier(seq, gamma.act(z), tol=local)
        vals[j] = det ** (k / 2) * cz_d ** (-k) * fz
    n = np.arange(1, n_max + 1)
    kern = np.exp(-2j * np.pi * np.outer(n, x + 1j * y))
    return kern @ vals / nodes


@dataclass
class FgammaReport:
    gamma: Matrix2x2
    coefficients: np.ndarray
    expected: np.ndarray
    tol: float

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.coefficients - self.expected)))

    @property
    def passed(self) -> bool:
        return self.max_error < self.tol


def check_slash_coefficients(seq: CoefficientSequence, q: int, b: int, n_max: int = 10, y: float = 0.25, nodes: int = 256, tol: float = 1e-5) -> FgammaReport:
    """Fourier coefficients of f|gamma_{q,b} against conj(xi(q)) f_n, n <= n_max."""
    g = smallest_representative(gamma_qa(q, b, seq.N), seq.N)
    coeffs = slash_fourier_coefficients(seq, g, n_max, y, nodes)
    expected = seq.nebentypus(q).conjugate() * seq.values[:n_max]
    return FgammaReport(g, coeffs, expected, tol)


@dataclass
class FrickeReport:
    epsilon: complex
    residuals: list[float]
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def fricke_check(seq: CoefficientSequence, eps: complex, z_points, tol: float = 1e-8) -> FrickeReport:
    """|(f|W_N)(z) - i^{-k} eps conj(f)(z)| on z_points, where conj(f) has the conjugated coefficients.

    With this sign the relation is the one equivalent to the cut-point functional
    equation; for odd k it differs from i^k eps by a factor -1.
    """
    f = FourierSeries(seq, tol=tol / 100)
    fbar = FourierSeries(seq, tol=tol / 100, conjugate=True)
    W = fricke(seq.N)
    c = 1j ** (-seq.k % 4) * eps
    res = [abs(slash(f, W, seq.k, complex(z)) - c * fbar(complex(z))) for z in z_points]
    return FrickeReport(eps, res, tol)
