"""Complex Gamma, Gamma_C and the upper incomplete gamma function, double precision."""

from __future__ import annotations

import cmath
import math

# Lanczos approximation, g = 607/128, 14 terms (Godfrey's coefficients).
_LANCZOS_G = 607 / 128
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005024
_LOG_2PI = math.log(2 * math.pi)


class PoleError(ValueError):
    """Argument is at a pole of the Gamma function."""


def _is_pole(s: complex) -> bool:
    return s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real)


def _loggamma_right(s: complex) -> complex:
    # valid for Re(s) >= 1/2
    ser = _LANCZOS_C0
    y = s
    for c in _LANCZOS_COEF:
        y += 1
        ser += c / y
    t = s + _LANCZOS_G + 0.5
    return (s + 0.5) * cmath.log(t) - t + cmath.log(_SQRT_2PI * ser / s)


def complex_loggamma(s: complex) -> complex:
    """A logarithm of Gamma(s) (not necessarily the principal branch of log Gamma)."""
    s = complex(s)
    if _is_pole(s):
        raise PoleError(f"Gamma has a pole at {s}")
    if s.real < 0.5:
        # Gamma(s) = pi / (sin(pi s) Gamma(1 - s))
        return math.log(math.pi) - cmath.log(cmath.sin(math.pi * s)) - _loggamma_right(1 - s)
    return _loggamma_right(s)


def complex_gamma(s: complex) -> complex:
    s = complex(s)
    g = cmath.exp(complex_loggamma(s))
    if s.imag == 0:
        return complex(g.real, 0.0)
    return g


def gamma_C(s: complex) -> complex:
    """2 (2 pi)^{-s} Gamma(s)."""
    s = complex(s)
    return 2 * cmath.exp(complex_loggamma(s) - s * _LOG_2PI)


_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 5000


def _lower_series(w: complex, x: float) -> complex:
    """gamma(w, x) = x^w e^{-x} sum_n x^n / (w (w+1) ... (w+n))."""
    term = 1 / w
    total = term
    ap = w
    for _ in range(_MAX_ITER):
        ap += 1
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma series did not converge at w={w}, x={x}")
    return total * cmath.exp(w * math.log(x) - x)


def _upper_cf(w: complex, x: float) -> complex:
    """Gamma(w, x) by the Legendre continued fraction (modified Lentz)."""
    b = x + 1 - w
    c = 1 / _TINY
    d = 1 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - w)
        b += 2
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma continued fraction did not converge at w={w}, x={x}")
    return cmath.exp(w * math.log(x) - x) * h


def _e1_series(x: float) -> float:
    # E1(x) = -euler_gamma - log x - sum_{n>=1} (-x)^n / (n n!)
    total = 0.0
    term = 1.0
    for n in range(1, _MAX_ITER):
        term *= -x / n
        contrib = term / n
        total += contrib
        if abs(contrib) < _EPS * max(abs(total), 1e-300):
            break
    return -0.5772156649015328606 - math.log(x) - total


def upper_incomplete_gamma(w: complex, x: float) -> complex:
    """Gamma(w, x) = int_x^inf t^{w-1} e^{-t} dt for real x > 0 and complex w."""
    if not x > 0:
        raise ValueError(f"upper_incomplete_gamma needs x > 0, got {x}")
    w = complex(w)
    x = float(x)
    if x >= abs(w) + 1:
        return _upper_cf(w, x)
    if _is_pole(w):
        m = int(-w.real)
        if x >= 1:
            return _upper_cf(w, x)
        # Gamma(-m, x) = (-1)^m/m! [E1(x) - e^{-x} sum_{j<m} (-1)^j j! / x^{j+1}]
        tail = sum((-1) ** j * math.factorial(j) / x ** (j + 1) for j in range(m))
        return complex((-1) ** m / math.factorial(m) * (_e1_series(x) - math.exp(-x) * tail))
    return complex_gamma(w) - _lower_series(w, x)
