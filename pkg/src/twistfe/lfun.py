"""Completed L-functions in cut-point form, root-number recovery, and the
Dirichlet-polynomial identities relating Ramanujan-sum and character twists.

For a sequence a_n of weight k and level M, with w = s + (k-1)/2,

    S(s; y) = 2 sum_n a_n (2 pi n)^{-w} Gamma(w, 2 pi n y)

is the part of 2 int_0^inf f(iy) y^w dy/y above height y. If the functional
equation holds with root number eps then, for every y > 0,

    Lambda(s) = S(s; y) + eps M^{1/2-s} conj(S(1 - conj(s); 1/(M y))),

so the right side is independent of y. That independence is the test, and
two heights determine eps.

Tolerances in this module are on the L-value scale: absolute errors divided
by |Gamma_C(s + (k-1)/2)|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import numpy as np

from .arith import GaussianRational, is_prime
from .characters import DirichletCharacter, ramanujan_sum
from .coeffs import CoefficientSequence, check_hecke_relations, eisenstein_coefficients
from .special import gamma_C, upper_incomplete_gamma


class InsufficientCoefficientsError(ValueError):
    def __init__(self, required: int, available: int, what: str = ""):
        self.required = required
        self.available = available
        super().__init__(
            f"insufficient coefficients: need X >= {required}, have {available}" + (f" ({what})" if what else "")
        )


class DegenerateCutPairError(ArithmeticError):
    pass


class ConstantTermError(ValueError):
    """The series has a constant term, so Lambda has poles and the cut-point identity needs residue terms."""


_MAX_X = 10**7


@dataclass(frozen=True)
class CompletedLFunction:
    """Gamma_C(s + (k-1)/2) sum lambda_n n^{-s} for a (possibly twisted) sequence."""

    seq: CoefficientSequence

    @property
    def M(self) -> int:
        return self.seq.N

    @property
    def k(self) -> int:
        return self.seq.k

    @property
    def tag(self) -> str:
        return self.seq.twist or "1"

    @property
    def has_constant_terms(self) -> bool:
        # an untwisted Eisenstein series, or its image under W_N, has a constant term;
        # a twist by a nontrivial character mod q coprime to N removes both
        return self.seq.origin == "eisenstein" and not self.seq.twist

    def require_cuspidal(self) -> None:
        if self.has_constant_terms:
            raise ConstantTermError("untwisted Eisenstein input: twist by a nontrivial character first")

    def gamma_scale(self, s: complex) -> float:
        return abs(gamma_C(s + (self.k - 1) / 2))


def as_lfunction(obj) -> CompletedLFunction:
    return obj if isinstance(obj, CompletedLFunction) else CompletedLFunction(obj)


# ---------------------------------------------------------------------------
# Cut-point sums
# ---------------------------------------------------------------------------


def tail_bound(C: float, k: int, w: complex, y: float, X: int) -> float:
    """Bound for |2 sum_{n>X} a_n (2 pi n)^{-w} Gamma(w, 2 pi n y)| given |a_n| <= C n^{k/2}."""
    sigma = w.real
    x1 = 2 * math.pi * (X + 1) * y
    if sigma > 1:
        if x1 <= sigma - 1:
            return math.inf
        F = 1 / (1 - (sigma - 1) / x1)
    else:
        F = 1.0
    alpha = k / 2 - 1
    rho = math.exp(-2 * math.pi * y) * (((X + 2) / (X + 1)) ** alpha if alpha > 0 else 1.0)
    if rho >= 1:
        return math.inf
    log_env = (
        math.log(2 * C * F)
        - sigma * math.log(2 * math.pi)
        + (sigma - 1) * math.log(2 * math.pi * y)
        + alpha * math.log(X + 1)
        - 2 * math.pi * (X + 1) * y
    )
    return math.exp(log_env) / (1 - rho)


def required_terms(C: float, k: int, w: complex, y: float, tol_abs: float, start: int = 1) -> int:
    """Smallest X >= start with tail_bound < tol_abs."""
    X = max(start, 1)
    # coarse doubling then bisection keeps this cheap for large answers
    if tail_bound(C, k, w, y, X) < tol_abs:
        return X
    hi = X
    while tail_bound(C, k, w, y, hi) >= tol_abs:
        hi *= 2
        if hi > _MAX_X:
            return _MAX_X
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(C, k, w, y, mid) < tol_abs:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class CutSum:
    value: complex
    X_used: int
    tail_bound: float


def cut_sum(L, s: complex, y0: float, tol: float = 1e-14, X: int | None = None) -> CutSum:
    """S(s; y0) truncated where the tail bound drops below ``tol`` (L-value scale).

    With ``X`` given, exactly X terms are summed and the bound is reported as is.
    """
    L = as_lfunction(L)
    seq = L.seq
    if not y0 > 0:
        raise ValueError("cut point must be positive")
    s = complex(s)
    w = s + (L.k - 1) / 2
    if X is None:
        tol_abs = tol * L.gamma_scale(s)
        X = required_terms(seq.C, L.k, w, y0, tol_abs)
        if X > seq.X:
            raise InsufficientCoefficientsError(X, seq.X, f"cut sum at s={s}, y={y0:g}")
    elif X > seq.X:
        raise InsufficientCoefficientsError(X, seq.X)
    tb = tail_bound(seq.C, L.k, w, y0, X)
    total = 0j
    two_pi = 2 * math.pi
    for n in range(1, X + 1):
        a = seq.values[n - 1]
        if a == 0:
            continue
        x = two_pi * n * y0
        total += a * cmath.exp(-w * math.log(two_pi * n)) * upper_incomplete_gamma(w, x)
    return CutSum(complex(2 * total), X, tb)


def _dual_term(L: CompletedLFunction, s: complex, y: float, tol: float) -> tuple[complex, int, float]:
    """T(s; y) = M^{1/2-s} conj(S(1 - conj(s); 1/(M y))), with X used and tail bound."""
    s = complex(s)
    s_dual = 1 - s.conjugate()
    # put the dual tail on the primal L-value scale
    fac = cmath.exp((0.5 - s) * math.log(L.M))
    ratio = L.gamma_scale(s) / (abs(fac) * L.gamma_scale(s_dual))
    cs = cut_sum(L, s_dual, 1 / (L.M * y), tol=tol * ratio)
    return fac * cs.value.conjugate(), cs.X_used, abs(fac) * cs.tail_bound


def fe_value(L, s: complex, eps: complex, y0: float, tol: float = 1e-14) -> complex:
    """S(s; y0) + eps M^{1/2-s} conj(S(1 - conj(s); 1/(M y0)))."""
    L = as_lfunction(L)
    primal = cut_sum(L, s, y0, tol=tol / 2)
    dual, _, _ = _dual_term(L, s, y0, tol / 2)
    return primal.value + eps * dual


def solve_epsilon(L, s: complex, y0: float, y1: float, tol: float = 1e-14) -> complex:
    """Root number from the two cut points y0 != y1 (nothing about eps is assumed)."""
    L = as_lfunction(L)
    L.require_cuspidal()
    if y0 == y1:
        raise DegenerateCutPairError("cut points must differ")
    S0 = cut_sum(L, s, y0, tol=tol / 2).value
    S1 = cut_sum(L, s, y1, tol=tol / 2).value
    T0 = _dual_term(L, s, y0, tol / 2)[0]
    T1 = _dual_term(L, s, y1, tol / 2)[0]
    den = T0 - T1
    if abs(den) < 1e-13 * max(abs(T0), abs(T1), 1e-300):
        raise DegenerateCutPairError(f"cut pair ({y0}, {y1}) is degenerate at s={s}")
    return (S1 - S0) / den


# ---------------------------------------------------------------------------
# Functional-equation verification
# ---------------------------------------------------------------------------

DEFAULT_S_GRID = (0.5 + 0j, 0.5 + 2j, 1.5 - 1j)
DEFAULT_Y_GRID = (0.7, 1.0, 1.4)  # in units of 1/sqrt(M)


def _complex_median(zs) -> complex:
    zs = np.asarray(zs, dtype=complex)
    return complex(float(np.median(zs.real)), float(np.median(zs.imag)))


@dataclass
class FEReport:
    epsilon: complex
    unimodularity_defect: float
    max_dispersion: float  # spread of fe_value over the y-grid, per s, L-value scale
    eps_spread: float  # max distance of an individual solve from the median
    X_used: int
    tol: float
    solves: list[tuple[complex, float, float, complex]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return max(self.unimodularity_defect, self.max_dispersion, self.eps_spread) <= self.tol

    def as_dict(self) -> dict:
        return {
            "epsilon_re": self.epsilon.real,
            "epsilon_im": self.epsilon.imag,
            "unimodularity_defect": self.unimodularity_defect,
            "max_dispersion": self.max_dispersion,
            "eps_spread": self.eps_spread,
            "pass": self.passed,
            "X_used": self.X_used,
            "tol": self.tol,
        }


def recover_epsilon(L, s_grid=DEFAULT_S_GRID, y_grid=DEFAULT_Y_GRID, tol: float = 1e-12) -> tuple[complex, list]:
    """Median root number over every (s, y-pair) solve; y_grid in units of 1/sqrt(M)."""
    L = as_lfunction(L)
    ys = [y / math.sqrt(L.M) for y in y_grid]
    solves = []
    for s in s_grid:
        for y0, y1 in combinations(ys, 2):
            solves.append((complex(s), y0, y1, solve_epsilon(L, s, y0, y1, tol=tol)))
    return _complex_median([e for *_, e in solves]), solves


def verify_fe(L, s_grid=DEFAULT_S_GRID, y_grid=DEFAULT_Y_GRID, tol: float = 1e-8) -> FEReport:
    """Recover eps, then check that fe_value is flat in y at every s."""
    L = as_lfunction(L)
    if not s_grid or len(y_grid) < 2:
        raise ValueError("need a nonempty s-grid and at least two cut points")
    inner = tol / 100
    eps, solves = recover_epsilon(L, s_grid, y_grid, tol=inner)
    ys = [y / math.sqrt(L.M) for y in y_grid]
    disp = 0.0
    X_used = 0
    for s in s_grid:
        scale = L.gamma_scale(s)
        vals = []
        for y in ys:
            vals.append(fe_value(L, s, eps, y, tol=inner))
            X_used = max(X_used, cut_sum(L, s, y, tol=inner / 2).X_used)
        for u, v in combinations(vals, 2):
            disp = max(disp, abs(u - v) / scale)
    spread = max(abs(e - eps) for *_, e in solves)
    return FEReport(
        epsilon=eps,
        unimodularity_defect=abs(abs(eps) - 1),
        max_dispersion=disp,
        eps_spread=spread,
        X_used=X_used,
        tol=tol,
        solves=solves,
    )


# ---------------------------------------------------------------------------
# Ramanujan-sum twist: D_q = Lambda_{c_q} / Lambda_1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletPolynomial:
    coeffs: dict

    def __post_init__(self):
        if any(n < 1 for n in self.coeffs):
            raise ValueError("Dirichlet polynomial support must be positive integers")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def __getitem__(self, n: int):
        return self.coeffs.get(n, 0)

    def __call__(self, s: complex) -> complex:
        s = complex(s)
        return sum(complex(c) * cmath.exp(-s * math.log(n)) for n, c in self.coeffs.items())


def ratio_Dq(lam_q, xi_q, q: int) -> DirichletPolynomial:
    """-1 + lambda_q q^{1-s} - xi(q) q^{1-2s}."""
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    return DirichletPolynomial({1: -1, q: lam_q * q, q * q: -xi_q * q})


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def check_Dq_fe(D: DirichletPolynomial, q: int, xi_q, tol: float = 0.0) -> bool:
    """Coefficient form of D(s) = xi(q) q^{1-2s} conj(D(1 - conj(s))).

    c_{q^2/n} = xi(q) (q/n) conj(c_n) for n in {1, q, q^2}. With tol = 0 the
    comparison is exact, which is meaningful for GaussianRational input.
    """
    allowed = {1, q, q * q}
    if not set(D.coeffs) <= allowed:
        raise ValueError(f"support {D.support} is not inside {{1, {q}, {q * q}}}")
    for n in (1, q, q * q):
        lhs = D[q * q // n]
        rhs = xi_q * (Fraction(q, n) if tol == 0 else q / n) * _conj(D[n])
        if tol == 0:
            if lhs != rhs:
                return False
        elif abs(complex(lhs - rhs)) > tol * max(1.0, abs(complex(lhs)), abs(complex(rhs))):
            return False
    return True


@dataclass
class TwistReport:
    q: int
    X: int
    exact: bool
    hecke_ok: bool
    violations: list[tuple[int, float]]

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_ramanujan_twist(seq: CoefficientSequence, q: int, X: int | None = None, tol: float = 1e-10) -> TwistReport:
    """Check a_n c_q(n) = -a_n + q a_q a_{n/q} [q|n] - q^k xi(q) a_{n/q^2} [q^2|n] for n <= X.

    This is the coefficientwise form of L_{c_q}(s) = D_q(s) L_1(s).
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if seq.N % q == 0:
        raise ValueError(f"q={q} divides the level {seq.N}")
    X = seq.X if X is None else X
    if X > seq.X:
        raise InsufficientCoefficientsError(X, seq.X)
    xi = seq.nebentypus
    exact = seq.exact is not None and xi.has_exact_values
    a = (None,) + (seq.exact if exact else tuple(seq.values))
    xq = xi.exact(q) if exact else xi(q)
    k = seq.k
    violations = []
    for n in range(1, X + 1):
        lhs = a[n] * ramanujan_sum(q, n)
        rhs = -a[n]
        if n % q == 0:
            rhs = rhs + q * a[q] * a[n // q]
        if n % (q * q) == 0:
            rhs = rhs - q**k * xq * a[n // (q * q)]
        d = lhs - rhs
        scale = n ** ((k - 1) / 2)
        if exact:
            if not d.is_zero():
                violations.append((n, abs(complex(d)) / scale))
        else:
            r = abs(d) / scale
            if r > tol * max(1.0, abs(lhs) / scale, abs(rhs) / scale):
                violations.append((n, r))
    hecke_ok = check_hecke_relations(seq.truncate(X)).passed if X >= 4 else True
    return TwistReport(q=q, X=X, exact=exact, hecke_ok=hecke_ok, violations=violations)


# ---------------------------------------------------------------------------
# Eisenstein series as a product of two Dirichlet L-series
# ---------------------------------------------------------------------------


@dataclass
class FactorizationReport:
    X: int
    exact: bool
    mismatches: list[tuple[int, float]]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def eisenstein_L_factorization(xi1: DirichletCharacter, xi2: DirichletCharacter, k: int, X: int) -> FactorizationReport:
    """Compare f_n with the Dirichlet convolution of L(s+(k-1)/2, xi1) and L(s-(k-1)/2, xi2).

    Both sides are multiplied through by n^{(k-1)/2}, so the convolution
    coefficient at n = d e is xi1(d) xi2(e) e^{k-1}.
    """
    seq = eisenstein_coefficients(xi1, xi2, k, X)
    exact = seq.exact is not None
    if exact:
        conv = [GaussianRational(0, 0) for _ in range(X + 1)]
        for e in range(1, X + 1):
            v2 = xi2.exact(e)
            if v2.is_zero():
                continue
            v2 = v2 * e ** (k - 1)
            for d in range(1, X // e + 1):
                v1 = xi1.exact(d)
                if not v1.is_zero():
                    conv[d * e] = conv[d * e] + v1 * v2
        target = (None,) + seq.exact
    else:
        conv = np.zeros(X + 1, dtype=complex)
        for e in range(1, X + 1):
            v2 = xi2(e) * e ** (k - 1)
            if v2 == 0:
                continue
            d = np.arange(1, X // e + 1)
            conv[d * e] += xi1.value_table[d % xi1.modulus] * v2
        target = np.concatenate([[0], seq.values])
    mismatches = []
    for n in range(1, X + 1):
        diff = conv[n] - target[n]
        if exact:
            if not diff.is_zero():
                mismatches.append((n, abs(complex(diff))))
        elif abs(diff) > 1e-10 * max(1.0, abs(target[n])):
            mismatches.append((n, abs(diff)))
    return FactorizationReport(X=X, exact=exact, mismatches=mismatches)
