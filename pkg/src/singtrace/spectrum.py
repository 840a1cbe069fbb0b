"""
Eigenvalues and norms on a symmetric interval [0, N].

Both endpoints carry the singularity -1/(4 z^2) + v_minus1/z, so the regular
solution phi ~ sqrt(z) is integrated from 0 to the midpoint only.  Eigen-
functions are even or odd about N/2:

    nu odd   phi'(N/2, k) = 0   (even eigenfunction)
    nu even  phi(N/2, k)  = 0   (odd eigenfunction)

which gives kappa_nu = 2 * int_0^{N/2} phi^2 dz.  Roots are refined by a
batched safeguarded Newton iteration that uses the k-sensitivity carried by
the integrator, inside brackets centred on a_nu = pi (nu - 1/2) / N.

The inverse norms are also stored in reduced form r_nu = 1/kappa_nu - pi a_nu/N;
the trace series only needs differences of these, and for the closed-form
spectra they are evaluated without cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import zeta

from .errors import DomainError, SpectrumError
from .potential import Potential
from .regsol import BoundState, integrate_batch
from .specfun import EULER_GAMMA, _hankel_pq, bessel_j, bessel_j0_zero

__all__ = [
    "IntervalSpectrum",
    "BoundStateSeries",
    "TailModel",
    "a_nu",
    "shoot_spectrum",
    "closed_spectrum",
    "asymptotic_k",
    "asymptotic_kappa",
    "dirichlet_spectrum",
]

SHOOT_TOL = 1e-12


def a_nu(nu, N: float = 1.0):
    """Reference momenta a_nu = pi (nu - 1/2) / N."""
    return math.pi * (np.asarray(nu, dtype=float) - 0.5) / N


@dataclass(frozen=True)
class IntervalSpectrum:
    """Eigen-momenta k_nu, parities and squared norms kappa_nu for nu = 1..len."""

    N: float
    nu: np.ndarray
    k: np.ndarray
    parity: tuple
    kappa: np.ndarray
    reduced_inv_kappa: np.ndarray = field(default=None)
    label: str = ""

    def __post_init__(self):
        n = len(self.nu)
        if not (len(self.k) == len(self.kappa) == len(self.parity) == n):
            raise DomainError("spectrum arrays have mismatched lengths")
        if n and np.any(np.diff(self.k) <= 0):
            raise SpectrumError("eigen-momenta are not strictly increasing")
        if n and np.any(np.asarray(self.kappa) <= 0):
            raise SpectrumError("norms must be positive")
        if self.reduced_inv_kappa is None:
            r = 1.0 / np.asarray(self.kappa) - math.pi * a_nu(self.nu, self.N) / self.N
            object.__setattr__(self, "reduced_inv_kappa", r)

    def __len__(self):
        return len(self.nu)

    @property
    def entries(self):
        return list(zip(self.nu.tolist(), self.k.tolist(), self.parity, self.kappa.tolist()))

    def truncate(self, nu_max: int) -> "IntervalSpectrum":
        if nu_max > len(self):
            raise DomainError(f"spectrum has only {len(self)} entries")
        s = slice(0, nu_max)
        return IntervalSpectrum(self.N, self.nu[s], self.k[s], self.parity[s], self.kappa[s],
                                self.reduced_inv_kappa[s], self.label)


@dataclass(frozen=True)
class BoundStateSeries:
    """Infinite family of bound states given in closed form, with an exact tail of sum 2/kappa."""

    nu: np.ndarray
    energy: np.ndarray
    kappa: np.ndarray
    tail_inv_kappa: Callable = field(repr=False, default=None)

    def states(self):
        return [BoundState(int(n), float(e), float(c)) for n, e, c in zip(self.nu, self.energy, self.kappa)]

    def sum_two_over_kappa(self) -> float:
        """sum over all nu of 2/kappa_nu, partial sum plus exact remainder."""
        partial = math.fsum(2.0 / self.kappa)
        return partial + (self.tail_inv_kappa(len(self.nu)) if self.tail_inv_kappa else 0.0)


@dataclass(frozen=True)
class TailModel:
    """Large-nu asymptotics of the spectra on [0, N]."""

    N: float
    v_minus1: float = 0.0
    u_integral: float = 0.0

    @classmethod
    def from_potential(cls, p: Potential) -> "TailModel":
        if not (p.is_interval and p.symmetric):
            raise DomainError("tail model needs a symmetric interval potential")
        return cls(p.N, p.v_minus1, p.u_integral())


def asymptotic_k(tail: TailModel, nu, ringed: bool = True):
    """a + {1/(2N^2) + (v/N)[ln(4aN) + gamma_E] (+ (1/N) int u)}/a, error O(a^-3)."""
    nu = np.asarray(nu)
    if np.any(nu < 1):
        raise DomainError("nu must be >= 1")
    a = a_nu(nu, tail.N)
    N = tail.N
    c = 1.0 / (2 * N * N) + tail.v_minus1 / N * (np.log(4 * a * N) + EULER_GAMMA)
    if not ringed:
        c = c + tail.u_integral / N
    out = a + c / a
    return out if out.ndim else float(out)


def asymptotic_kappa(tail: TailModel, nu):
    """N/(pi a_nu), error O(a^-2)."""
    nu = np.asarray(nu)
    if np.any(nu < 1):
        raise DomainError("nu must be >= 1")
    out = tail.N / (math.pi * a_nu(nu, tail.N))
    return out if out.ndim else float(out)


def _parities(nu):
    return tuple("even" if n % 2 == 1 else "odd" for n in np.asarray(nu).tolist())


# --------------------------------------------------------------------------
# Shooting
# --------------------------------------------------------------------------

def _midpoint_values(p: Potential, ks, odd_mask, tol):
    res = integrate_batch(p, ks, 0.5 * p.N, tol=tol)
    f = np.where(odd_mask, res.dphi[-1], res.phi[-1])
    fk = np.where(odd_mask, res.dphi_k[-1], res.phi_k[-1])
    return f, fk, 2.0 * res.norm[-1]


def shoot_spectrum(p: Potential, nu_max: int, tol: float = SHOOT_TOL, nu_min: int = 1,
                   max_iter: int = 60) -> IntervalSpectrum:
    """Eigenvalues nu_min..nu_max of a symmetric interval potential by parity shooting.

    Raises
    ------
    SpectrumError
        If a bracket shows no sign change after widening, or Newton fails.
    """
    if not (p.is_interval and p.symmetric):
        raise DomainError("shooting needs a symmetric interval potential")
    if nu_min < 1 or nu_max < nu_min:
        raise DomainError("need 1 <= nu_min <= nu_max")
    N = p.N
    nu = np.arange(nu_min, nu_max + 1)
    odd = nu % 2 == 1
    a = a_nu(nu, N)
    half = math.pi / (2 * N)
    delta = 1e-6
    lo = np.maximum(a - half + delta, 1e-8)
    hi = a + half - delta
    int_tol = min(tol, 1e-11)
    f_lo, _, _ = _midpoint_values(p, lo, odd, int_tol)
    f_hi, _, _ = _midpoint_values(p, hi, odd, int_tol)
    bad = np.sign(f_lo) * np.sign(f_hi) >= 0
    widen = 0
    while bad.any():
        widen += 1
        if widen > 3:
            raise SpectrumError(f"no sign change for nu = {nu[bad].tolist()}; root missed")
        # widen adaptively toward the neighbouring brackets
        lo = np.where(bad, np.maximum(lo - 0.25 * half, 1e-8), lo)
        hi = np.where(bad, hi + 0.25 * half, hi)
        f_lo, _, _ = _midpoint_values(p, lo, odd, int_tol)
        f_hi, _, _ = _midpoint_values(p, hi, odd, int_tol)
        bad = np.sign(f_lo) * np.sign(f_hi) >= 0
    s_lo = np.sign(f_lo)
    k = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f, fk, kappa = _midpoint_values(p, k, odd, int_tol)
        left = np.sign(f) == s_lo
        lo = np.where(left, k, lo)
        hi = np.where(left, hi, k)
        step = np.where(fk != 0, f / np.where(fk != 0, fk, 1.0), 0.0)
        k_new = k - step
        outside = (k_new <= lo) | (k_new >= hi) | (fk == 0)
        k_new = np.where(outside, 0.5 * (lo + hi), k_new)
        done = np.abs(k_new - k) <= tol * np.maximum(k, 1.0)
        k = k_new
        if done.all():
            break
    else:
        raise SpectrumError("Newton iteration for the eigenvalues did not converge")
    _, _, kappa = _midpoint_values(p, k, odd, int_tol)
    if np.any(np.diff(k) <= 0):
        raise SpectrumError("shooting roots are not strictly increasing; a root was missed")
    return IntervalSpectrum(N, nu, k, _parities(nu), kappa, label=p.name or "shoot")


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------

def _vtilde4_odd_roots(nu_odd, N):
    """Roots of J0(Nk/2) - N k J1(Nk/2) near a_nu (safeguarded Newton)."""
    a = a_nu(nu_odd, N)
    half = math.pi / (2 * N)
    lo, hi = np.maximum(a - half, 1e-12), a + half
    k = a + 1.0 / (2 * N * N * a)

    def g(k):
        x = 0.5 * N * k
        return bessel_j(0, x) - N * k * bessel_j(1, x)

    def dg(k):
        x = 0.5 * N * k
        return -0.5 * N * bessel_j(1, x) - 0.5 * N * N * k * bessel_j(0, x)

    s_lo = np.sign(g(lo))
    for _ in range(100):
        f = g(k)
        left = np.sign(f) == s_lo
        lo = np.where(left, k, lo)
        hi = np.where(left, hi, k)
        k_new = k - f / dg(k)
        k_new = np.where((k_new <= lo) | (k_new >= hi), 0.5 * (lo + hi), k_new)
        if np.all(np.abs(k_new - k) <= 4e-16 * k):
            return k_new
        k = k_new
    raise SpectrumError("odd roots of the reference spectrum did not converge")


def _quadrant_cos_sin(m, t):
    """cos and sin of m pi/2 + t for integer m, with the quadrant applied exactly."""
    c, s = np.cos(t), np.sin(t)
    q = np.mod(m, 4)
    cos_out = np.select([q == 0, q == 1, q == 2, q == 3], [c, -s, -c, s])
    sin_out = np.select([q == 0, q == 1, q == 2, q == 3], [s, c, -s, -c])
    return cos_out, sin_out


def _vtilde4_shift(nu, N, k_guess, iterations=8):
    """delta = k - a_nu for the reference spectrum, solved in the Hankel form.

    With x = N k / 2 the phase chi = x - pi/4 equals (nu - 1) pi/2 + N delta/2,
    so its quadrant is exact and delta keeps full relative precision.
    Returns delta, cos chi, sin chi and the Hankel P, Q of orders 0 and 1.
    """
    a = a_nu(nu, N)
    odd = nu % 2 == 1
    delta = k_guess - a
    for _ in range(iterations):
        k = a + delta
        x = 0.5 * N * k
        p0, q0 = _hankel_pq(0, x)
        p1, q1 = _hankel_pq(1, x)
        c, s = _quadrant_cos_sin(nu - 1, 0.5 * N * delta)
        f0 = p0 * c - q0 * s
        f1 = p1 * s + q1 * c
        d0 = -(p0 * s + q0 * c)
        d1 = p1 * c - q1 * s
        f = np.where(odd, f0 - N * k * f1, f0)
        df = np.where(odd, d0 - N * k * d1 - 2.0 * f1, d0)
        step = (f / df) * 2.0 / N
        delta = delta - step
        if np.all(np.abs(step) <= 1e-17 * np.abs(delta) + 1e-300):
            break
    k = a + delta
    x = 0.5 * N * k
    p0, q0 = _hankel_pq(0, x)
    p1, q1 = _hankel_pq(1, x)
    c, s = _quadrant_cos_sin(nu - 1, 0.5 * N * delta)
    return delta, c, s, (p0, q0, p1, q1)


def _bessel_norm_reduced(nu, k, N):
    """kappa = (N^2/4)(J0^2 + J1^2)(Nk/2) and r = 1/kappa - pi a/N.

    For Nk/2 > 25 everything is formed from delta = k - a and the Hankel
    expansion, so 1 - S with S = (pi x/2)(J0^2 + J1^2) carries no cancellation.
    """
    x = 0.5 * N * k
    j0, j1 = bessel_j(0, x), bessel_j(1, x)
    kappa = 0.25 * N * N * (j0 * j0 + j1 * j1)
    a = a_nu(nu, N)
    r = 1.0 / kappa - math.pi * a / N
    big = x > 25.0
    if np.any(big):
        delta, c, s, _ = _vtilde4_shift(nu[big], N, k[big])
        kb = a[big] + delta
        xb = 0.5 * N * kb
        p0, q0 = _hankel_pq(0, xb, reduced=True)
        p1, q1 = _hankel_pq(1, xb, reduced=True)
        # p0, p1 hold P - 1 here
        one_minus_s = -(p0 * (p0 + 2) * c * c + p1 * (p1 + 2) * s * s
                        + q0 * q0 * s * s + q1 * q1 * c * c - 2 * (1 + p0) * q0 * c * s + 2 * (1 + p1) * q1 * s * c)
        # 1/kappa = pi k / (N S)
        r[big] = (math.pi / N) * (delta + kb * one_minus_s / (1.0 - one_minus_s))
        kappa[big] = 0.25 * N * N * (2.0 / (math.pi * xb)) * (1.0 - one_minus_s)
    return kappa, r


def closed_spectrum(case: str, nu_max: int, N: float = 1.0):
    """Exact spectra.

    ``v4``             k = pi (nu - 1/2), kappa = 1/(pi^2 (nu - 1/2))
    ``vtilde4``        even nu: k = 2 j_{0,nu/2}; odd nu: J0(k/2) = k J1(k/2);
                       kappa = (J0^2 + J1^2)(k/2) / 4
    ``vtilde3_bound``  E = -4/(pi^4 (nu - 1/2)^2), kappa = pi^4 (2 nu - 1)^3 / 64
    """
    if nu_max < 1:
        raise DomainError("nu_max must be >= 1")
    nu = np.arange(1, nu_max + 1)
    if case == "v4":
        if N != 1.0:
            raise DomainError("the closed v4 spectrum is for N = 1")
        k = math.pi * (nu - 0.5)
        kappa = 1.0 / (math.pi**2 * (nu - 0.5))
        return IntervalSpectrum(1.0, nu, k, _parities(nu), kappa, np.zeros(nu_max), "v4")
    if case == "vtilde4":
        k = np.empty(nu_max)
        even = nu % 2 == 0
        if even.any():
            k[even] = 2.0 * np.atleast_1d(bessel_j0_zero(nu[even] // 2)) / N
        if (~even).any():
            k[~even] = _vtilde4_odd_roots(nu[~even], N)
        kappa, r = _bessel_norm_reduced(nu, k, N)
        return IntervalSpectrum(N, nu, k, _parities(nu), kappa, r, "vtilde4")
    if case == "vtilde3_bound":
        energy = -4.0 / (math.pi**4 * (nu - 0.5) ** 2)
        kappa = math.pi**4 * (2 * nu - 1.0) ** 3 / 64.0

        def tail(m):
            # sum_{nu > m} 128 / (pi^4 (2nu - 1)^3) = (16/pi^4) zeta(3, m + 1/2)
            return 16.0 / math.pi**4 * float(zeta(3.0, m + 0.5))

        return BoundStateSeries(nu, energy, kappa, tail)
    raise DomainError(f"unknown closed spectrum {case!r}; choose from v4, vtilde4, vtilde3_bound")


# --------------------------------------------------------------------------
# Nonsingular Dirichlet problem (cross-check utility)
# --------------------------------------------------------------------------

def dirichlet_spectrum(v: Callable, nu_max: int, tol: float = 1e-12, length: float = 1.0) -> np.ndarray:
    """Dirichlet eigenvalues eps_1..eps_nu_max of -phi'' + v phi on [0, length].

    ``v`` must be continuous on the closed interval.  Newton on the energy
    with the sensitivity equation, started from (nu pi / length)^2.
    """
    if nu_max < 1:
        raise DomainError("nu_max must be >= 1")
    nu = np.arange(1, nu_max + 1)
    e = (nu * math.pi / length) ** 2
    n = nu_max

    def shoot(e):
        def rhs(z, y):
            y = y.reshape(4, n)
            q = v(z) - e
            return np.concatenate([y[1], q * y[0], y[3], q * y[2] - y[0]])

        y0 = np.concatenate([np.zeros(n), np.ones(n), np.zeros(n), np.zeros(n)])
        sol = solve_ivp(rhs, (0.0, length), y0, method="DOP853", rtol=tol, atol=tol * 1e-3)
        if sol.status != 0:
            raise SpectrumError(sol.message)
        y = sol.y[:, -1].reshape(4, n)
        return y[0], y[2]

    for _ in range(50):
        f, fe = shoot(e)
        step = f / fe
        e = e - step
        if np.all(np.abs(step) <= tol * np.maximum(e, 1.0)):
            return e
    raise SpectrumError("Dirichlet eigenvalue iteration did not converge")
