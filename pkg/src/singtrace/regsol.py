"""
Regular solutions phi(z, k) ~ sqrt(z) of  -phi'' + v(z) phi = k^2 phi.

The solution is launched from a Frobenius series at a small z0 and carried
outward by an embedded Runge-Kutta pair (scipy's DOP853).  Many momenta are
integrated in one batched ODE system.  Besides phi and phi', the state carries
the k-derivatives (for Newton steps in the eigenvalue search) and the running
norm integral of phi^2; the norm component starts from the exact integral of
the launch series, so the sqrt(z) endpoint needs no special quadrature.

Scattering data are read off the large-z form

    phi ~ (A/k) sin[k z + eta - (v_minus1 / (2k)) ln(2 k z) + O(1/z)]

by a linear least-squares fit against a phase-amplitude (Milne) basis whose
asymptotic series includes every algebraic correction generated by the
c2/z^2 + c1/z far field, so the O(1/z) terms are not a fit error.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import BarycentricInterpolator
from scipy.special import expit

from .errors import DomainError, IntegrationError
from .potential import Potential
from .specfun import (EULER_GAMMA, bessel_j, hyp2f1, laguerre_l, log_gamma,
                      whittaker_m)

__all__ = [
    "RegularSolution",
    "ScatteringFit",
    "ScatteringData",
    "BoundState",
    "frobenius_coefficients",
    "frobenius_launch",
    "integrate_regular",
    "integrate_batch",
    "extract_scattering",
    "closed_form_regsol",
    "closed_form_sigma",
    "closed_scattering",
    "numeric_scattering",
    "jost_function_v1",
    "jost_consistency",
    "asymptotic_whittaker",
]

DEFAULT_Z0 = 1e-3
DEFAULT_TOL = 1e-11
_C = 4.0 / math.pi**2  # |v_minus1| of the Coulomb-type reference potentials
_CA = math.pi * _C  # 4/pi, the exponent scale in their amplitudes


# --------------------------------------------------------------------------
# Data types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularSolution:
    """Samples of the regular solution at one momentum.

    ``z``, ``phi`` and ``dphi`` are aligned arrays; ``far_field`` is the
    (c2, c1) large-z model of the potential when it exists.
    """

    k: float
    z: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    launch_z: float
    launch_order: int
    far_field: Optional[tuple] = None

    @property
    def samples(self):
        return list(zip(self.z, self.phi, self.dphi))


@dataclass(frozen=True)
class ScatteringFit:
    """Result of a least-squares scattering fit."""

    k: float
    sigma: float
    eta: float
    residual: float
    window: tuple


@dataclass(frozen=True)
class BoundState:
    """Bound state nu with energy < 0 and squared norm kappa of the sqrt(z)-normalised solution."""

    nu: int
    energy: float
    kappa: float

    def __post_init__(self):
        if self.nu < 1 or not self.energy < 0 or not self.kappa > 0:
            raise DomainError("bound state needs nu >= 1, energy < 0 and kappa > 0")


@dataclass(frozen=True)
class ScatteringData:
    """Amplitude logarithm sigma(k) and phase eta(k), closed-form or numeric.

    ``excess(k)`` returns exp(-2 sigma) - pi/(2k) evaluated without
    cancellation; the half-line trace integrals consume only this.  For
    numeric data the functions are valid on ``k_support`` only.
    """

    kind: str
    v_minus1: float
    _sigma: Callable = field(repr=False)
    _excess: Callable = field(repr=False)
    _eta: Optional[Callable] = field(default=None, repr=False)
    k_support: tuple = (0.0, math.inf)

    @property
    def log_phase_coeff(self) -> float:
        """Coefficient of ln(2kz)/k in the phase."""
        return -0.5 * self.v_minus1

    def _check(self, k):
        k = np.asarray(k, dtype=float)
        if np.any(k <= 0):
            raise DomainError("scattering data need k > 0")
        lo, hi = self.k_support
        if np.any(k > hi * (1 + 1e-12)) or np.any(k < lo * (1 - 1e-12)):
            raise DomainError(f"k outside the supported range [{lo}, {hi}]")
        return k

    def sigma(self, k):
        return self._sigma(self._check(k))

    def amplitude(self, k):
        return np.exp(self.sigma(k))

    def eta(self, k):
        if self._eta is None:
            raise DomainError(f"no phase available for {self.kind}")
        return self._eta(self._check(k))

    def excess(self, k):
        return self._excess(self._check(k))


# --------------------------------------------------------------------------
# Frobenius launch
# --------------------------------------------------------------------------

def frobenius_coefficients(p: Potential, k: float, order: int, with_dk: bool = False):
    """Coefficients a_n of phi = sqrt(z) sum a_n z^n, a_0 = 1.

    Substituting the series into the equation gives
    n^2 a_n = v_minus1 a_{n-1} + sum_j w_j a_{n-2-j},  w_0 = u_0 - k^2, w_j = u_j.
    With ``with_dk`` the k-derivatives b_n are returned as well.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    if not p.regular.analytic:
        raise DomainError("Frobenius launch needs an analytic regular part")
    w = np.array(p.taylor_coefficients(max(order, 2)), dtype=float)
    w[0] -= k * k
    vm1 = p.v_minus1
    a = np.zeros(order + 1)
    b = np.zeros(order + 1)
    a[0] = 1.0
    for n in range(1, order + 1):
        s = vm1 * a[n - 1]
        t = vm1 * b[n - 1]
        for j in range(0, n - 1):
            s += w[j] * a[n - 2 - j]
            t += w[j] * b[n - 2 - j]
        if n >= 2:
            t -= 2.0 * k * a[n - 2]
        a[n] = s / (n * n)
        b[n] = t / (n * n)
    return (a, b) if with_dk else a


def _auto_order(p: Potential, k: float, z0: float) -> int:
    order = 6
    while order < 80:
        a = frobenius_coefficients(p, k, order + 2)
        tail = np.abs(a[-3:]) * z0 ** np.arange(order, order + 3)
        if np.all(tail < 1e-17):
            return order
        order += 2
    return order


def _launch_state(p: Potential, k: float, z0: float, order: Optional[int]):
    """(phi, dphi, phi_k, dphi_k, norm) at z0 and the order used."""
    if order is None:
        order = _auto_order(p, k, z0)
    a, b = frobenius_coefficients(p, k, order, with_dk=True)
    n = np.arange(order + 1)
    zn = z0**n
    sq = math.sqrt(z0)
    phi = sq * np.dot(a, zn)
    dphi = np.dot(a * (n + 0.5), zn) / sq
    phik = sq * np.dot(b, zn)
    dphik = np.dot(b * (n + 0.5), zn) / sq
    c = np.convolve(a, a)
    m = np.arange(c.size)
    norm = np.dot(c, z0 ** (m + 2) / (m + 2))
    return np.array([phi, dphi, phik, dphik, norm]), order


def frobenius_launch(p: Potential, k: float, z0: float = DEFAULT_Z0, order: Optional[int] = None):
    """Launch values (phi, dphi) at z0 from the Frobenius series.

    ``order=None`` picks the smallest even order >= 6 whose dropped terms are
    below 1e-17 relative to the leading one.
    """
    if not (0 < z0 <= 1e-2):
        raise DomainError("launch point must satisfy 0 < z0 <= 1e-2")
    if order is not None and order < 2:
        raise DomainError("launch order must be >= 2")
    state, _ = _launch_state(p, k, z0, order)
    return float(state[0]), float(state[1])


# --------------------------------------------------------------------------
# Batched integrator
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BatchResult:
    """Batched integration output; arrays have shape (len(z), len(k))."""

    k: np.ndarray
    z: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    phi_k: np.ndarray
    dphi_k: np.ndarray
    norm: np.ndarray
    orders: np.ndarray


def integrate_batch(p: Potential, ks: Sequence[float], z1: float, z_out=None,
                    tol: float = DEFAULT_TOL, z0: float = DEFAULT_Z0,
                    order: Optional[int] = None) -> BatchResult:
    """Integrate the regular solutions for all momenta ``ks`` from z0 to z1.

    ``z_out`` selects output points (default: z1 only).  The local error
    control uses rtol = tol and atol = 1e-3 tol on every component.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    if not (tol > 0):
        raise DomainError("tol must be positive")
    if p.is_interval and z1 > p.N:
        raise DomainError("z1 lies outside the interval")
    if not z1 > z0:
        raise DomainError("z1 must exceed the launch point")
    nk = ks.size
    y0 = np.empty((5, nk))
    orders = np.empty(nk, dtype=int)
    for i, k in enumerate(ks):
        y0[:, i], orders[i] = _launch_state(p, k, z0, order)
    k2 = ks * ks
    two_k = 2.0 * ks

    def rhs(z, y):
        y = y.reshape(5, nk)
        q = p.eval(z) - k2
        out = np.empty_like(y)
        out[0] = y[1]
        out[1] = q * y[0]
        out[2] = y[3]
        out[3] = q * y[2] - two_k * y[0]
        out[4] = y[0] * y[0]
        return out.ravel()

    z_eval = np.array([z1]) if z_out is None else np.asarray(z_out, dtype=float)
    if z_eval.size and (z_eval.min() < z0 or z_eval.max() > z1):
        raise DomainError("output points must lie in [z0, z1]")
    sol = solve_ivp(rhs, (z0, z1), y0.ravel(), method="DOP853", t_eval=z_eval,
                    rtol=tol, atol=tol * 1e-3)
    if sol.status != 0:
        raise IntegrationError(f"integration stopped early: {sol.message}")
    y = sol.y.reshape(5, nk, -1).transpose(0, 2, 1)
    return BatchResult(ks, sol.t, y[0], y[1], y[2], y[3], y[4], orders)


def integrate_regular(p: Potential, k: float, z0: float = DEFAULT_Z0, z1: float = 30.0,
                      tol: float = DEFAULT_TOL, z_out=None, order: Optional[int] = None) -> RegularSolution:
    """Regular solution at one momentum, sampled at ``z_out`` (default 2001 points)."""
    if z_out is None:
        z_out = np.linspace(z0, z1, 2001)
    res = integrate_batch(p, [k], z1, z_out=z_out, tol=tol, z0=z0, order=order)
    try:
        ff = p.far_field()
    except DomainError:
        ff = None
    return RegularSolution(float(k), res.z, res.phi[:, 0], res.dphi[:, 0], z0, int(res.orders[0]), ff)


# --------------------------------------------------------------------------
# Scattering extraction
# --------------------------------------------------------------------------

def _ser_mul(a, b):
    return np.convolve(a, b)[: a.size]


def _ser_inv(a):
    out = np.zeros_like(a)
    out[0] = 1.0 / a[0]
    for n in range(1, a.size):
        out[n] = -np.dot(a[1: n + 1], out[n - 1:: -1][:n]) / a[0]
    return out


def _ser_sqrt(a):
    out = np.zeros_like(a)
    out[0] = math.sqrt(a[0])
    for n in range(1, a.size):
        out[n] = (a[n] - np.dot(out[1:n], out[n - 1: 0: -1])) / (2.0 * out[0])
    return out


def _ser_dz(a):
    """d/dz of a series in x = 1/z."""
    out = np.zeros_like(a)
    n = np.arange(a.size)
    out[2:] = -(n[1:-1] * a[1:-1])
    return out


def milne_series(k: float, c2: float, c1: float, order: int = 12) -> np.ndarray:
    """Coefficients y_n of theta'(z) = sum y_n z^-n for Q = k^2 - c2/z^2 - c1/z.

    Solves y^2 = Q + (3/4)(y'/y)^2 - (1/2) y''/y order by order, which makes
    rho = y^(-1/2) an exact-asymptotic solution of the Ermakov equation.
    """
    q = np.zeros(order + 1)
    q[0] = k * k
    q[1] = -c1
    if order >= 2:
        q[2] = -c2
    y = _ser_sqrt(q)
    for _ in range(order + 1):
        yp = _ser_dz(y)
        ypp = _ser_dz(yp)
        inv = _ser_inv(y)
        r = _ser_mul(yp, inv)
        t = q + 0.75 * _ser_mul(r, r) - 0.5 * _ser_mul(ypp, inv)
        y = _ser_sqrt(t)
    return y


def milne_basis(k: float, c2: float, c1: float, z, order: int = 12):
    """(rho, rho', theta, theta') at z for the far field c2/z^2 + c1/z."""
    z = np.asarray(z, dtype=float)
    y = milne_series(k, c2, c1, order)
    x = 1.0 / z
    n = np.arange(y.size)
    yz = np.polynomial.polynomial.polyval(x, y)
    dyz = np.polynomial.polynomial.polyval(x, _ser_dz(y))
    rho = yz ** -0.5
    drho = -0.5 * yz ** -1.5 * dyz
    theta = k * z + y[1] * np.log(2.0 * k * z)
    if y.size > 2:
        theta -= np.polynomial.polynomial.polyval(x, np.concatenate(([0.0], y[2:] / n[1:-1])))
    return rho, drho, theta, yz


def extract_scattering(sol: RegularSolution, v_minus1: Optional[float] = None,
                       fit_window: Optional[tuple] = None,
                       far_field: Optional[tuple] = None) -> ScatteringFit:
    """Fit sigma = ln A and eta to the tail of a regular solution.

    The far field (c2, c1) defaults to ``sol.far_field``; if only ``v_minus1``
    is given, c2 = -1/4 and c1 = v_minus1 are assumed (pure singular tail).
    ``eta`` is reduced to [0, pi); the log term -(v_minus1/(2k)) ln(2kz) is
    kept out of it.
    """
    if far_field is None:
        if v_minus1 is not None and (sol.far_field is None or sol.far_field[1] != v_minus1):
            far_field = (-0.25, v_minus1)
        elif sol.far_field is not None:
            far_field = sol.far_field
        else:
            raise DomainError("no far-field model available for the fit")
    c2, c1 = far_field
    k = sol.k
    if not k > 0:
        raise DomainError("scattering extraction needs k > 0")
    za, zb = fit_window if fit_window is not None else (sol.z[-1] * 2 / 3, sol.z[-1])
    sel = (sol.z >= za) & (sol.z <= zb)
    if sel.sum() < 4:
        raise DomainError(f"fit window [{za}, {zb}] contains fewer than 4 samples")
    z = sol.z[sel]
    rho, drho, th, yz = milne_basis(k, c2, c1, z)
    s, c = np.sin(th), np.cos(th)
    # phi = alpha rho sin + beta rho cos, phi' follows with theta' = y
    rows_phi = np.column_stack([rho * s, rho * c])
    rows_dphi = np.column_stack([drho * s + rho * yz * c, drho * c - rho * yz * s]) / k
    m = np.vstack([rows_phi, rows_dphi])
    rhs = np.concatenate([sol.phi[sel], sol.dphi[sel] / k])
    coef, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    if not np.all(np.isfinite(coef)) or np.linalg.cond(m) > 1e8:
        raise DomainError("ill-conditioned scattering fit; widen the window")
    resid = float(np.sqrt(np.mean((m @ coef - rhs) ** 2)) / max(np.sqrt(np.mean(rhs**2)), 1e-300))
    amp = math.hypot(*coef)
    eta = math.atan2(coef[1], coef[0]) % math.pi
    return ScatteringFit(float(k), math.log(amp * math.sqrt(k)), float(eta), resid, (float(za), float(zb)))


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------

CLOSED_REGSOL_CASES = ("v1", "vtilde1", "vtilde2", "vtilde3_cont", "vtilde3_bound", "vtilde3_zero")


def _coulomb_regsol(v_minus1: float, z: float, k: float) -> float:
    kappa = v_minus1 / (2.0 * k)
    val = cmath.exp(0.25j * math.pi) / math.sqrt(2.0 * k) * whittaker_m(-1j * kappa, -2j * k * z)
    return val.real


def closed_form_regsol(case: str, z: float, k: float = 0.0, nu: Optional[int] = None) -> float:
    """Exact regular solutions, all normalised to phi ~ sqrt(z).

    ``v1``             sqrt(tanh z) cosh(z)^(-ik) 2F1((2ik+1)/4, (2ik+3)/4; 1; tanh^2 z)
    ``vtilde1``        sqrt(z) J0(kz)
    ``vtilde2``        e^{i pi/4} (2k)^(-1/2) M_{-i kappa,0}(-2ikz), kappa = 2/(pi^2 k)
    ``vtilde3_cont``   same with kappa -> -kappa
    ``vtilde3_bound``  sqrt(z) exp(-4z/(pi^2 (2nu-1))) L_{nu-1}(8z/(pi^2 (2nu-1)))
    ``vtilde3_zero``   sqrt(z) J0(4 sqrt(z)/pi)
    """
    if not z > 0:
        raise DomainError("closed-form regular solutions need z > 0")
    if case == "vtilde1":
        return math.sqrt(z) * float(bessel_j(0, k * z))
    if case == "vtilde3_zero":
        return math.sqrt(z) * float(bessel_j(0, 4.0 * math.sqrt(z) / math.pi))
    if case == "vtilde3_bound":
        if nu is None or nu < 1:
            raise DomainError("vtilde3_bound needs nu >= 1")
        s = math.pi**2 * (2 * nu - 1)
        return math.sqrt(z) * math.exp(-4.0 * z / s) * float(laguerre_l(nu - 1, 8.0 * z / s))
    if not k > 0:
        raise DomainError(f"{case} closed form needs k > 0")
    if case == "v1":
        t = math.tanh(z)
        a = (2j * k + 1) / 4
        f = hyp2f1(a, a + 0.5, 1.0, t * t)
        # cosh(z)^(-ik) with log cosh z = z + log1p(e^{-2z}) - log 2
        lc = z + math.log1p(math.exp(-2.0 * z)) - math.log(2.0)
        return (math.sqrt(t) * cmath.exp(-1j * k * lc) * f).real
    if case == "vtilde2":
        return _coulomb_regsol(_C, z, k)
    if case == "vtilde3_cont":
        return _coulomb_regsol(-_C, z, k)
    raise DomainError(f"unknown closed-form case {case!r}")


SIGMA_CASES = ("v1", "vtilde1", "v2", "vtilde2", "v3", "vtilde3")


def _closed_parts(case: str):
    """(sigma, excess, eta or None, v_minus1) for a closed-form case."""
    pi = math.pi
    if case == "v1":
        return (lambda k: 0.5 * np.log(2 * k / pi / np.tanh(pi * k)),
                lambda k: -(pi / k) * expit(-2 * pi * k),
                None, 0.0)
    if case == "vtilde1":
        return (lambda k: 0.5 * np.log(2 * k / pi),
                lambda k: np.zeros_like(k),
                lambda k: np.full_like(k, pi / 4), 0.0)
    if case == "v2":
        return (lambda k: 0.5 * np.log(k / np.arctan(k)),
                lambda k: -np.arctan(1.0 / k) / k,
                None, _C)
    if case == "vtilde2":
        return (lambda k: 0.5 * (np.log(k / pi) + _CA / (2 * k) + np.logaddexp(_CA / (2 * k), -_CA / (2 * k))),
                lambda k: -(pi / (2 * k)) * np.tanh(_CA / (2 * k)),
                lambda k: _coulomb_eta(_C, k), _C)
    if case == "v3":
        return (lambda k: np.log(k) - 0.5 * np.log1p(pi * k / 2),
                lambda k: 1.0 / k**2,
                None, -_C)
    if case == "vtilde3":
        return (lambda k: 0.5 * (np.log(k / pi) - _CA / (2 * k) + np.logaddexp(_CA / (2 * k), -_CA / (2 * k))),
                lambda k: (pi / (2 * k)) * np.tanh(_CA / (2 * k)),
                lambda k: _coulomb_eta(-_C, k), -_C)
    raise DomainError(f"unknown scattering case {case!r}; choose from {', '.join(SIGMA_CASES)}")


def _coulomb_eta(v_minus1: float, k):
    """pi/4 + arg Gamma(1/2 + i v_minus1/(2k)), reduced to [0, pi)."""
    k = np.asarray(k, dtype=float)
    out = np.array([(math.pi / 4 + log_gamma(0.5 + 0.5j * v_minus1 / kk).imag) % math.pi
                    for kk in k.ravel()]).reshape(k.shape)
    return out if out.ndim else float(out)


def closed_form_sigma(case: str, k):
    """sigma = ln A for the six closed-form amplitudes."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("closed_form_sigma needs k > 0")
    out = _closed_parts(case)[0](k)
    return out if out.ndim else float(out)


def closed_scattering(case: str) -> ScatteringData:
    """ScatteringData for one of the closed-form cases."""
    sigma, excess, eta, vm1 = _closed_parts(case)
    return ScatteringData(f"closed:{case}", vm1, sigma, excess, eta)


def numeric_scattering(p: Potential, n_nodes: int = 60, k_range: tuple = (0.0, 6.0),
                       window: tuple = (20.0, 30.0), tol: float = DEFAULT_TOL,
                       samples: int = 401) -> ScatteringData:
    """Scattering data from ODE integration on a Chebyshev grid of momenta.

    q(k) = k exp(-2 sigma) is fitted at first-kind Chebyshev nodes of
    ``k_range`` and interpolated barycentrically; it is smooth through k = 0
    for short-range potentials and tends to pi/2 at large k.
    """
    lo, hi = k_range
    if not (0 <= lo < hi) or n_nodes < 2:
        raise DomainError("need 0 <= k_lo < k_hi and at least two nodes")
    x = np.cos(math.pi * (np.arange(n_nodes) + 0.5) / n_nodes)[::-1]
    ks = lo + (hi - lo) * (x + 1) / 2
    z_out = np.linspace(window[0], window[1], samples)
    res = integrate_batch(p, ks, window[1], z_out=z_out, tol=tol)
    ff = p.far_field()
    sig = np.empty(n_nodes)
    eta = np.empty(n_nodes)
    for i, k in enumerate(ks):
        sol = RegularSolution(k, res.z, res.phi[:, i], res.dphi[:, i], DEFAULT_Z0, int(res.orders[i]), ff)
        fit = extract_scattering(sol, fit_window=window)
        sig[i], eta[i] = fit.sigma, fit.eta
    q = ks * np.exp(-2.0 * sig)
    interp = BarycentricInterpolator(ks, q)
    # unwrap eta before interpolating so the interpolant stays smooth
    eta_interp = BarycentricInterpolator(ks, np.unwrap(eta, period=math.pi))

    def sigma(k):
        return -0.5 * np.log(interp(k) / k)

    def excess(k):
        return (interp(k) - 0.5 * math.pi) / k

    def eta_fn(k):
        return np.mod(eta_interp(k), math.pi)

    data = ScatteringData("numeric", p.v_minus1, sigma, excess, eta_fn, (lo, hi))
    object.__setattr__(data, "nodes", ks)
    object.__setattr__(data, "node_sigma", sig)
    return data


# --------------------------------------------------------------------------
# Jost function and large-z asymptotics
# --------------------------------------------------------------------------

def jost_function_v1(k: float) -> complex:
    """F(k) = -i sqrt(2) k Gamma(-ik) / (sqrt(pi) Gamma(1/2 - ik)) for the sinh well."""
    if k == 0:
        raise DomainError("the Jost function formula needs k != 0")
    return -1j * math.sqrt(2.0 / math.pi) * k * cmath.exp(log_gamma(-1j * k) - log_gamma(0.5 - 1j * k))


def jost_consistency(k: float, case: str = "v1") -> float:
    """|sqrt(F(k) F(-k)) - A(k)| for the sinh well."""
    if case != "v1":
        raise DomainError("the Jost relation is only available for v1")
    if not k > 0:
        raise DomainError("jost_consistency needs k > 0")
    prod = jost_function_v1(k) * jost_function_v1(-k)
    return abs(cmath.sqrt(prod) - math.exp(closed_form_sigma("v1", k)))


def asymptotic_whittaker(v_minus1: float, k: float, z: float, gamma_e: float = EULER_GAMMA) -> float:
    """Large-kz form of the sqrt(z)-normalised Coulomb-type regular solution.

    sqrt(2/(pi k)) exp[pi v/(4k) - 1/(16 k^2 z^2) + v/(4 k^2 z) + pi^2 v/(16 k^4)]
        * cos{kz - pi/4 - 1/(8kz) - (v/(2k)) [gamma_e + ln(8kz)]}

    with v = v_minus1, evaluated exactly as this truncated expression; it is
    first order in v_minus1.
    """
    if k * z < 5:
        raise DomainError("asymptotic_whittaker needs k z >= 5")
    v = v_minus1
    amp = math.sqrt(2.0 / (math.pi * k)) * math.exp(
        math.pi * v / (4 * k) - 1.0 / (16 * k * k * z * z) + v / (4 * k * k * z) + math.pi**2 * v / (16 * k**4))
    phase = k * z - math.pi / 4 - 1.0 / (8 * k * z) - v / (2 * k) * (gamma_e + math.log(8 * k * z))
    return amp * math.cos(phase)

