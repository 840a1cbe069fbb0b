"""
Special functions used throughout the package.

Everything here works in double precision and targets a relative error of
about 1e-13 (absolute near zeros of oscillatory functions).  The functions
are pure; none of them keeps state between calls.

Coverage
--------
log_gamma, digamma      complex log-Gamma (principal branch), real digamma
bessel_j                J0 and J1 of real argument (vectorised)
bessel_j0_zero          zeros of J0, plus bessel_j1_zero for interlacing checks
hyp1f1, whittaker_m     Kummer 1F1 with complex parameters, Whittaker M_{kappa,0}
hyp2f1                  Gauss 2F1 on 0 <= x <= 1, including the logarithmic case
legendre_p, laguerre_l  orthogonal polynomials by three-term recurrence

Evaluation policy for 1F1
-------------------------
Re z < 0      mapped to Re z > 0 by Kummer's transformation first.
|z| <= 8      Kummer's Taylor series.
8 < |z| < 30  Taylor steps of Kummer's ODE along the ray from |z| = 8.  Purely
              imaginary arguments (the ones regular solutions need) make the
              plain series cancel catastrophically long before |z| = 30.
|z| >= 30     two-sided asymptotic expansion, optimally truncated; if the
              truncation error is not small enough (large |a|), the ODE
              continuation is carried further out instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "AccuracyBudget",
    "log_gamma",
    "gamma",
    "rgamma",
    "digamma",
    "bessel_j",
    "bessel_j0_zero",
    "bessel_j1_zero",
    "hyp1f1",
    "whittaker_m",
    "hyp2f1",
    "legendre_p",
    "laguerre_l",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class AccuracyBudget:
    """Accuracy target shared by the series-based evaluators."""

    rel_tol: float = 1e-13
    max_terms: int = 5000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise ValueError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_BUDGET = AccuracyBudget()


def _check_finite(*values):
    for v in values:
        if not cmath.isfinite(complex(v)):
            raise DomainError(f"non-finite argument {v!r}")


# --------------------------------------------------------------------------
# Gamma family
# --------------------------------------------------------------------------

# B_{2n} / (2n (2n-1)) for n = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z) for complex z.

    The argument is shifted upward until |z| >= 15 and Re z >= 1/2, where the
    Stirling series with ten Bernoulli terms is accurate to machine precision;
    the shift is undone with a sum of principal logarithms, which reproduces
    the analytic continuation from the positive real axis.
    """
    _check_finite(z)
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at z={z.real:g}")
    w = z
    shift = 0j
    while abs(w) < 15.0 or w.real < 0.5:
        shift += cmath.log(w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series - shift


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles."""
    if _is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


_DIGAMMA_ASY = (1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0,
                -691.0 / 32760.0, 1.0 / 12.0)


def digamma(x: float) -> float:
    """psi(x) for real x, by upward recurrence and the asymptotic series."""
    x = float(x)
    _check_finite(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"digamma has a pole at x={x:g}")
    acc = 0.0
    if x < 0.0:
        # reflection keeps the recurrence short
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = 0.0
    p = inv2
    for c in _DIGAMMA_ASY:
        s += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - s


# --------------------------------------------------------------------------
# Bessel J0, J1
# --------------------------------------------------------------------------

_SERIES_MAX = 5.0
_MILLER_MAX = 25.0
_MILLER_START = 80


def _bessel_series(order: int, x: np.ndarray) -> np.ndarray:
    h2 = -(0.5 * x) ** 2
    term = np.ones_like(x) if order == 0 else 0.5 * x
    out = term.copy()
    for m in range(1, 40):
        term = term * h2 / (m * (m + order))
        out = out + term
    return out


def _bessel_miller(order: int, x: np.ndarray) -> np.ndarray:
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    j0 = j1 = None
    for n in range(_MILLER_START, 0, -1):
        j_prev = (2.0 * n / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds J_{n-1}
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm = norm + 2.0 * j_cur
        if n - 1 == 1:
            j1 = j_cur
    j0 = j_cur
    norm = norm + j0
    return (j0 if order == 0 else j1) / norm


def _hankel_pq(order: int, x: np.ndarray, nterms: int = 22, reduced: bool = False):
    """Hankel P and Q; with ``reduced`` the first return value is P - 1."""
    mu = 4.0 * order * order
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    inv8x = 1.0 / (8.0 * x)
    term = np.ones_like(x)
    for k in range(1, nterms):
        term = term * ((mu - (2 * k - 1) ** 2) / k) * inv8x
        signed = term if (k // 2) % 2 == 0 else -term
        if k % 2 == 1:
            q = q + signed
        else:
            p = p + signed
    return (p, q) if reduced else (1.0 + p, q)


def _bessel_asymptotic(order: int, x: np.ndarray) -> np.ndarray:
    p, q = _hankel_pq(order, x)
    chi = x - (0.5 * order + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j(order: int, x):
    """Bessel function of the first kind, J0 or J1, for real x.

    Power series for |x| <= 5, Miller backward recurrence up to 25 and the
    Hankel expansion beyond.  Accepts scalars or arrays.
    """
    if order not in (0, 1):
        raise DomainError(f"only orders 0 and 1 are supported, got {order}")
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j needs finite arguments")
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax <= _SERIES_MAX
    mid = (ax > _SERIES_MAX) & (ax <= _MILLER_MAX)
    big = ax > _MILLER_MAX
    if small.any():
        out[small] = _bessel_series(order, ax[small])
    if mid.any():
        out[mid] = _bessel_miller(order, ax[mid])
    if big.any():
        out[big] = _bessel_asymptotic(order, ax[big])
    if order == 1:
        out = np.where(arr < 0, -out, out)
    return out if out.ndim else float(out)


def _newton_polish(f, df, x, iterations=8, tol=1e-15):
    for _ in range(iterations):
        step = f(x) / df(x)
        x = x - step
        if np.all(np.abs(step) <= tol * np.abs(x)):
            break
    return x


def bessel_j0_zero(m):
    """m-th positive zero of J0 (m >= 1), scalar or array."""
    marr = np.asarray(m)
    if np.any(marr < 1) or not np.all(marr == np.floor(marr)):
        raise DomainError("zero index must be an integer >= 1")
    beta = (marr.astype(float) - 0.25) * np.pi
    ib = 1.0 / (8.0 * beta)
    # McMahon's expansion as starting point
    x = beta + ib - (124.0 / 3.0) * ib**3 + (120928.0 / 15.0) * ib**5
    x = _newton_polish(lambda t: bessel_j(0, t), lambda t: -bessel_j(1, t), x)
    return x if x.ndim else float(x)


def bessel_j1_zero(m):
    """m-th positive zero of J1 (m >= 1), excluding the zero at the origin."""
    marr = np.asarray(m)
    if np.any(marr < 1) or not np.all(marr == np.floor(marr)):
        raise DomainError("zero index must be an integer >= 1")
    beta = (marr.astype(float) + 0.25) * np.pi
    x = beta - 3.0 / (8.0 * beta) + 3.0 / (128.0 * beta**3)
    x = _newton_polish(lambda t: bessel_j(1, t),
                       lambda t: bessel_j(0, t) - bessel_j(1, t) / t, x)
    return x if x.ndim else float(x)


# --------------------------------------------------------------------------
# Confluent hypergeometric 1F1 and Whittaker M
# --------------------------------------------------------------------------

_TAYLOR_RADIUS = 8.0
_ASYMPTOTIC_RADIUS = 30.0


def _taylor_1f1(a, b, z, budget):
    term = 1.0 + 0j
    total = term
    small = 0
    for n in range(budget.max_terms):
        term *= (a + n) / ((b + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= 1e-17 * abs(total) and n > abs(z):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"1F1 Taylor series did not converge in {budget.max_terms} terms")


def _asymptotic_1f1(a, b, z):
    """Optimally truncated large-|z| expansion; returns (value, error estimate)."""
    sign = 1.0 if z.imag >= 0.0 else -1.0
    log_z = cmath.log(z)

    def series(p, q, w):
        total = 1.0 + 0j
        term = 1.0 + 0j
        prev = 1.0
        for s in range(200):
            nxt = term * (p + s) * (q + s) / ((s + 1) * w)
            if abs(nxt) >= prev or nxt == 0:
                return total, abs(nxt) if nxt != 0 else 0.0
            term = nxt
            prev = abs(term)
            total += term
        return total, prev

    s1, e1 = series(a, a - b + 1.0, -z)
    s2, e2 = series(1.0 - a, b - a, z)
    pre1 = cmath.exp(sign * 1j * math.pi * a - a * log_z) * rgamma(b - a)
    pre2 = cmath.exp(z + (a - b) * log_z) * rgamma(a)
    gb = gamma(b)
    value = gb * (pre1 * s1 + pre2 * s2)
    err = abs(gb) * (abs(pre1) * e1 + abs(pre2) * e2)
    return value, err


def _kummer_taylor_step(a, b, zc, w, dw, h):
    """Advance (w, w') of Kummer's ODE from zc to zc + h by a Taylor series."""
    c_prev, c_cur = w, dw
    val = w + dw * h
    der = dw + 0j
    hp = h
    scale = abs(w) + abs(dw * h) + 1e-300
    small = 0
    n = 0
    while True:
        c_next = ((n + a) * c_prev - (n + 1) * (n + b - zc) * c_cur) / (zc * (n + 1) * (n + 2))
        hp_next = hp * h
        val += c_next * hp_next
        der += (n + 2) * c_next * hp
        mag = abs(c_next * hp_next)
        if mag <= 1e-18 * scale and n > 4:
            small += 1
            if small >= 3:
                return val, der
        else:
            small = 0
        c_prev, c_cur = c_cur, c_next
        hp = hp_next
        n += 1
        if n > 400:
            raise ConvergenceError("Taylor step of Kummer's equation did not converge")


def _continue_1f1(a, b, z, budget, start=None):
    """Analytic continuation of 1F1 along the ray through z, starting at |z| = 8."""
    r = abs(z)
    u = z / r
    if start is None:
        zc = u * _TAYLOR_RADIUS
        w = _taylor_1f1(a, b, zc, budget)
        dw = a / b * _taylor_1f1(a + 1.0, b + 1.0, zc, budget)
    else:
        zc, w, dw = start
    while abs(zc) < r:
        h_len = min(0.5 * abs(zc), 2.0, r - abs(zc))
        h = u * h_len
        w, dw = _kummer_taylor_step(a, b, zc, w, dw, h)
        zc = zc + h
        if abs(r - abs(zc)) < 1e-14 * r:
            break
    return w, dw


def hyp1f1(a, b, z, budget: AccuracyBudget = DEFAULT_BUDGET) -> complex:
    """Kummer's confluent hypergeometric function 1F1(a; b; z).

    Parameters may be complex.  ``b`` must not be a non-positive integer.
    """
    _check_finite(a, b, z)
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise PoleError(f"1F1 undefined for b={b.real:g}")
    if z == 0:
        return 1.0 + 0j
    if z.real < 0 and not _is_nonpositive_integer(a):
        # Kummer's transformation; the series on the left half-plane cancels
        return cmath.exp(z) * hyp1f1(b - a, b, -z, budget)
    if _is_nonpositive_integer(a) or abs(z) <= _TAYLOR_RADIUS:
        out = _taylor_1f1(a, b, z, budget)
    elif abs(z) < _ASYMPTOTIC_RADIUS:
        out, _ = _continue_1f1(a, b, z, budget)
    else:
        out, err = _asymptotic_1f1(a, b, z)
        if not err <= budget.rel_tol * abs(out):
            out, _ = _continue_1f1(a, b, z, budget)
    if not cmath.isfinite(out):
        raise ConvergenceError(f"1F1({a}; {b}; {z}) is not finite")
    return out


def whittaker_m(kappa, z, budget: AccuracyBudget = DEFAULT_BUDGET) -> complex:
    """Whittaker function M_{kappa,0}(z) = exp(-z/2) sqrt(z) 1F1(1/2 - kappa; 1; z).

    Principal branches of sqrt and log are used.
    """
    _check_finite(kappa, z)
    z = complex(z)
    if z == 0:
        raise DomainError("whittaker_m needs z != 0")
    return cmath.exp(-0.5 * z) * cmath.sqrt(z) * hyp1f1(0.5 - complex(kappa), 1.0, z, budget)


# --------------------------------------------------------------------------
# Gauss 2F1
# --------------------------------------------------------------------------

def _gauss_series(a, b, c, x, budget):
    term = 1.0 + 0j
    total = term
    small = 0
    for n in range(budget.max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        if term == 0:
            return total
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"2F1 series did not converge in {budget.max_terms} terms (x={x})")


def _pochhammer(a, k):
    out = 1.0 + 0j
    for j in range(k):
        out *= a + j
    return out


def _log_case_2f1(a, b, m, x, budget):
    """2F1(a, b; a+b+m; x) for integer m >= 0 and 1/2 < x < 1 (real a, b)."""
    y = 1.0 - x
    c = a + b + m
    first = 0.0
    if m > 0:
        pre = (rgamma(a + m) * rgamma(b + m)).real
        for k in range(m):
            first += (_pochhammer(a, k) * _pochhammer(b, k)).real * math.factorial(m - k - 1) \
                / math.factorial(k) * (-y) ** k
        first *= pre
    pre2 = (rgamma(a) * rgamma(b)).real
    second = 0.0
    if pre2 != 0.0:
        log_y = math.log(y)
        term = 1.0 / math.factorial(m)
        small = 0
        for k in range(budget.max_terms):
            bracket = (log_y - digamma(k + 1) - digamma(k + m + 1)
                       + digamma(a + k + m) + digamma(b + k + m))
            contrib = term * bracket
            second += contrib
            if abs(contrib) <= 1e-17 * max(abs(second), 1e-300) and k > 2:
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
            term *= (a + m + k) * (b + m + k) / ((k + 1) * (k + m + 1)) * y
        else:
            raise ConvergenceError("logarithmic 2F1 expansion did not converge")
        second *= (-y) ** m * pre2
    return gamma(c).real * (first - second)


def hyp2f1(a, b, c, x, budget: AccuracyBudget = DEFAULT_BUDGET):
    """Gauss hypergeometric function 2F1(a, b; c; x) for real 0 <= x <= 1.

    Parameters may be complex.  For x > 1/2 the argument is mapped to 1 - x;
    when c - a - b is an integer the logarithmic form of that connection
    formula is used (real parameters only).  Returns a float when all
    parameters are real.
    """
    _check_finite(a, b, c, x)
    x = float(x)
    real_params = all(complex(p).imag == 0.0 for p in (a, b, c))
    a, b, c = complex(a), complex(b), complex(c)
    if _is_nonpositive_integer(c):
        raise PoleError(f"2F1 undefined for c={c.real:g}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"hyp2f1 is implemented for 0 <= x <= 1, got {x}")

    def finish(v):
        return v.real if real_params else v

    if x == 0.0:
        return finish(1.0 + 0j)
    terminating = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)
    if x <= 0.5 or terminating:
        if x == 1.0 and not terminating:
            pass
        else:
            return finish(_gauss_series(a, b, c, x, budget))
    s = c - a - b
    if x == 1.0:
        if s.real <= 0.0:
            raise DomainError("2F1(a,b;c;1) diverges unless Re(c-a-b) > 0")
        return finish(cmath.exp(log_gamma(c) + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b))
                      if not (_is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b))
                      else 0j)
    m = round(s.real)
    if s.imag == 0.0 and abs(s.real - m) < 1e-12:
        if not real_params:
            raise DomainError("logarithmic case of 2F1 needs real parameters")
        if m >= 0:
            return _log_case_2f1(a.real, b.real, m, x, budget)
        # Euler transformation flips the sign of c - a - b
        return (1.0 - x) ** m * _log_case_2f1((c - a).real, (c - b).real, -m, x, budget)
    y = 1.0 - x
    t1 = 0j
    if not (_is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b)):
        t1 = cmath.exp(log_gamma(c) + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b)) \
            * _gauss_series(a, b, 1.0 - s, y, budget)
    t2 = 0j
    if not (_is_nonpositive_integer(a) or _is_nonpositive_integer(b)):
        t2 = cmath.exp(s * math.log(y) + log_gamma(c) + log_gamma(-s) - log_gamma(a) - log_gamma(b)) \
            * _gauss_series(c - a, c - b, 1.0 + s, y, budget)
    return finish(t1 + t2)


# --------------------------------------------------------------------------
# Orthogonal polynomials
# --------------------------------------------------------------------------

def legendre_p(n: int, x):
    """Legendre polynomial P_n(x) by the Bonnet recurrence."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p if p.ndim else float(p)


def laguerre_l(n: int, x):
    """Laguerre polynomial L_n(x) by its three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if n == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    l = 1.0 - x
    for j in range(1, n):
        l_prev, l = l, ((2 * j + 1 - x) * l - j * l_prev) / (j + 1)
    return l if l.ndim else float(l)
