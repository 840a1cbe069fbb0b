"""
Povzner-Levitan and Gel'fand-Levitan kernels near the boundary.

With v_ring = v_sg = -1/(4 z^2) and an even regular part
v0 + v2 z^2 + v4 z^4 + ..., the transformation kernel has the expansion

    P(z, s) = sqrt(z s) sum_{j,k} P_jk z^{2j} s^{2k},      0 < s < z,

and K follows from the GL equation K + P + int_0^z P(z,t) K(s,t) dt = 0.
The potential is recovered through v = v_ring + 2 d/dz P(z, z), so that
v0 = -2 lim K(z,z)/z.  For v_minus1 != 0 the expansion is organised as
P(z, s) = sum_j P_j(s/z) z^j instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import zeta

from .errors import ConvergenceError, DomainError
from .specfun import bessel_j, hyp2f1
from .spectrum import IntervalSpectrum, TailModel, a_nu, asymptotic_k

__all__ = [
    "KernelExpansionEven",
    "KernelSum",
    "pl_coeffs_even",
    "pl_linear_system",
    "gl_kernel_even",
    "gl_residual_even",
    "p_general",
    "p2_ode_residual",
    "v0_from_kernel",
    "kernel_from_spectra",
    "ringed_bessel_eigenfunction",
]

# index pairs (j, k) in the order P00, P10, P01, P20, P11, P02
_IDX = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


@dataclass(frozen=True)
class KernelExpansionEven:
    """Coefficients of P and K in the basis sqrt(z s) z^{2j} s^{2k}, ordered as ``_IDX``."""

    v0: float
    v2: float
    v4: float
    P: Tuple[float, ...]
    K: Tuple[float, ...]

    def p_value(self, z, s):
        return _eval_even(self.P, z, s)

    def k_value(self, z, s):
        return _eval_even(self.K, z, s)


def _eval_even(coef, z, s):
    return math.sqrt(z * s) * sum(c * z ** (2 * j) * s ** (2 * k) for c, (j, k) in zip(coef, _IDX))


def pl_linear_system(v0: float, v2: float, v4: float):
    """Matrix and right-hand side for (P00, P10, P01, P20, P11, P02).

    Rows 1-3 are the recovery conditions v0 = 2 P00, v2 = 6 (P10 + P01),
    v4 = 10 (P20 + P11 + P02); rows 4-6 come from matching the kernel PDE.
    """
    A = np.array([
        [2, 0, 0, 0, 0, 0],
        [0, 6, 6, 0, 0, 0],
        [0, 0, 0, 10, 10, 10],
        [-v0, 4, -4, 0, 0, 0],
        [-v2, -v0, 0, 16, -4, 0],
        [0, 0, -v0, 0, 4, -16],
    ], dtype=float)
    b = np.array([v0, v2, v4, 0.0, 0.0, 0.0])
    return A, b


def pl_coeffs_even(v0: float, v2: float, v4: float, check: bool = True) -> KernelExpansionEven:
    """Closed-form P and K coefficients, cross-checked against the 6x6 linear system."""
    P = (
        v0 / 2,
        v2 / 12 + v0**2 / 16,
        v2 / 12 - v0**2 / 16,
        v4 / 60 + v0**3 / 384 + v0 * v2 / 32,
        v4 / 15 - v0**3 / 192 - v0 * v2 / 48,
        v4 / 60 + v0**3 / 384 - v0 * v2 / 96,
    )
    k10 = v0**2 / 16 - v2 / 12
    k20 = v0 * v2 / 96 - v0**3 / 384 - v4 / 60
    K = (-v0 / 2, k10, k10, k20, v0 * v2 / 24 - v0**3 / 96 - v4 / 15, k20)
    if check:
        A, b = pl_linear_system(v0, v2, v4)
        sol = np.linalg.solve(A, b)
        scale = max(1.0, float(np.max(np.abs(sol))))
        if np.max(np.abs(sol - np.array(P))) > 1e-14 * scale * 10:
            raise ConvergenceError("closed-form PL coefficients disagree with the linear system")
    return KernelExpansionEven(v0, v2, v4, P, K)


def gl_kernel_even(v0: float, v2: float, v4: float, z: float, s: float) -> float:
    """Truncated small-argument expansion of K(z, s), valid for 0 < s <= z << 1."""
    if not (0 < s <= z):
        raise DomainError("need 0 < s <= z")
    if z > 0.3:
        warnings.warn("z > 0.3: the truncated kernel expansion is outside its regime", RuntimeWarning,
                      stacklevel=2)
    return pl_coeffs_even(v0, v2, v4, check=False).k_value(z, s)


def gl_residual_even(v0: float, v2: float, v4: float, z: float, s: float) -> float:
    """|K(z,s) + P(z,s) + int_0^z P(z,t) K(s,t) dt| for the truncated series.

    The integral is done term by term: each product contributes
    sqrt(z s) z^{2a} s^{2c} int_0^z t^{1 + 2b + 2d} dt.
    """
    e = pl_coeffs_even(v0, v2, v4, check=False)
    integral = 0.0
    for cp, (a, b) in zip(e.P, _IDX):
        for ck, (c, d) in zip(e.K, _IDX):
            n = 2 + 2 * b + 2 * d
            integral += cp * ck * z ** (2 * a) * s ** (2 * c) * z**n / n
    integral *= math.sqrt(z * s)
    return abs(e.k_value(z, s) + e.p_value(z, s) + integral)


# --------------------------------------------------------------------------
# v_minus1 != 0
# --------------------------------------------------------------------------

def p_general(rho, v0: float, v_minus1: float, v1: float):
    """Leading functions P1(rho), P2(rho) of P(z, s) = P1(s/z) z + P2(s/z) z^2 + ...

    P2 is the solution that stays O(sqrt(rho)) at rho -> 0; the second
    homogeneous solution carries sqrt(rho) ln(rho) and is excluded.
    """
    rho = float(rho)
    if not (0 < rho <= 1):
        raise DomainError("rho must lie in (0, 1]")
    sq = math.sqrt(rho)
    p1 = 0.5 * v0 * sq
    f = hyp2f1(-0.5, -0.5, 1.0, rho * rho).real
    p2 = math.pi / 16 * (v1 - 4 * v0 * v_minus1) * f * sq + 0.5 * v0 * v_minus1 * (1 + rho) * sq
    return p1, p2


def _p2_derivatives(rho: float, v0: float, v_minus1: float, v1: float):
    """P2, P2', P2'' from d/dx 2F1(a,b;c;x) = (ab/c) 2F1(a+1,b+1;c+1;x)."""
    x = rho * rho
    sq = math.sqrt(rho)
    f = hyp2f1(-0.5, -0.5, 1.0, x).real
    fx = 0.25 * hyp2f1(0.5, 0.5, 2.0, x).real
    fxx = 0.03125 * hyp2f1(1.5, 1.5, 3.0, x).real
    g = f * sq
    g1 = 2 * rho * fx * sq + 0.5 * f / sq
    g2 = 4 * x * fxx * sq + 2 * fx * sq + 2 * rho * fx / sq - 0.25 * f / (rho * sq)
    h = (1 + rho) * sq
    h1 = 0.5 / sq + 1.5 * sq
    h2 = -0.25 / (rho * sq) + 0.75 / sq
    ca = math.pi / 16 * (v1 - 4 * v0 * v_minus1)
    cb = 0.5 * v0 * v_minus1
    return ca * g + cb * h, ca * g1 + cb * h1, ca * g2 + cb * h2


def p2_ode_residual(rho: float, v0: float, v_minus1: float, v1: float) -> float:
    """Residual of the P2 equation with exact derivatives.

    (rho^2 - 1) P2'' - 2 rho P2' + (9 - rho^-2)/4 P2 - v_minus1 (1 - 1/rho) P1 = 0
    """
    if not (0 < rho < 1):
        raise DomainError("rho must lie in (0, 1)")
    p1 = 0.5 * v0 * math.sqrt(rho)
    p2, d1, d2 = _p2_derivatives(rho, v0, v_minus1, v1)
    return (rho * rho - 1) * d2 - 2 * rho * d1 + 0.25 * (9 - rho**-2) * p2 - v_minus1 * (1 - 1 / rho) * p1


# --------------------------------------------------------------------------
# v0 from the kernel diagonal
# --------------------------------------------------------------------------

def v0_from_kernel(K_diag: Callable[[float], float], z0: float = 0.05, levels: int = 7,
                   powers: Sequence[int] = (1, 2), rtol: float = 1e-2) -> Tuple[float, float]:
    """Richardson limit of -2 K(z,z)/z over z_j = z0 2^-j.

    Eliminates the listed powers of z in turn.  Returns the value and the
    difference between the last two extrapolants as the error.

    Raises
    ------
    ConvergenceError
        If the extrapolants are not settling down.
    """
    if levels < len(powers) + 2:
        raise DomainError("need at least len(powers) + 2 levels")
    zs = z0 * 0.5 ** np.arange(levels)
    row = np.array([-2.0 * K_diag(float(z)) / z for z in zs])
    for p in powers:
        fac = 2.0**p
        row = (fac * row[1:] - row[:-1]) / (fac - 1.0)
    value = float(row[-1])
    err = float(abs(row[-1] - row[-2]))
    diffs = np.abs(np.diff(row))
    if err > rtol * max(1.0, abs(value)) or (diffs.size > 1 and diffs[-1] > 10 * diffs[0] and err > 1e-8):
        raise ConvergenceError(f"kernel limit did not settle (last change {err:.3e})")
    return value, err


# --------------------------------------------------------------------------
# K(z, z') from two spectra
# --------------------------------------------------------------------------

def ringed_bessel_eigenfunction(z, k):
    """sqrt(z) J0(k z), the regular solution for v_ring = -1/(4 z^2)."""
    z = np.asarray(z, dtype=float)
    return np.sqrt(z) * bessel_j(0, np.asarray(k) * z)


@dataclass(frozen=True)
class KernelSum:
    value: float
    partial: float
    tail: float
    error: float
    nu_max: int


def _terms(z, zp, k, k_ring, inv_kappa, d_inv_kappa, phi):
    f = phi(z, k) * phi(zp, k)
    f_ring = phi(z, k_ring) * phi(zp, k_ring)
    return (f - f_ring) * inv_kappa + f_ring * d_inv_kappa


def kernel_from_spectra(z: float, zp: float, spec: IntervalSpectrum, spec_ring: IntervalSpectrum,
                        eigenfunction: Callable = ringed_bessel_eigenfunction,
                        nu_max: Optional[int] = None, tail: Optional[TailModel] = None,
                        tail_ring: Optional[TailModel] = None, tail_factor: int = 64) -> KernelSum:
    """K(z, z') = sum_nu [phi_r(z,k) phi_r(z',k)/kappa - phi_r(z,k_r) phi_r(z',k_r)/kappa_r].

    Each summand is written as [f(k) - f(k_r)]/kappa + f(k_r)(1/kappa - 1/kappa_r),
    which pairs eigenvalues of equal index and decays.  With tail models for
    both spectra the sum is continued to ``tail_factor * nu_max`` using the
    asymptotic eigen-momenta and kappa ~ N/(pi a); beyond that the smooth part
    f ~ 1/(pi k) gives a zeta-function remainder.  The error estimate adds the
    change when the continuation length is halved to the mismatch between
    exact and modelled terms over the last tenth of the computed range.
    """
    if not (0 < z < spec.N and 0 < zp < spec.N):
        raise DomainError("z and z' must lie in (0, N)")
    if spec.N != spec_ring.N:
        raise DomainError("spectra refer to different intervals")
    if nu_max is None:
        nu_max = min(len(spec), len(spec_ring))
    if len(spec) < nu_max or len(spec_ring) < nu_max:
        raise DomainError("spectra are shorter than nu_max")
    N = spec.N
    s, sr = spec.truncate(nu_max), spec_ring.truncate(nu_max)
    inv = math.pi * a_nu(s.nu, N) / N + s.reduced_inv_kappa
    d_inv = s.reduced_inv_kappa - sr.reduced_inv_kappa
    t = _terms(z, zp, s.k, sr.k, inv, d_inv, eigenfunction)
    partial = math.fsum(t)
    last_tenth = slice(nu_max - max(nu_max // 10, 2), nu_max)
    if tail is None or tail_ring is None:
        err = float(np.max(np.abs(np.cumsum(t[last_tenth]))))
        return KernelSum(partial, partial, 0.0, err, nu_max)

    def modelled(nu):
        # each model carries its own int u, so both use the unringed form
        k = asymptotic_k(tail, nu, ringed=False)
        kr = asymptotic_k(tail_ring, nu, ringed=False)
        # 1/kappa ~ pi a / N for both, so the second piece drops out
        return _terms(z, zp, k, kr, math.pi * a_nu(nu, N) / N, 0.0, eigenfunction), k, kr

    def continuation(last):
        nu = np.arange(nu_max + 1, last + 1)
        terms, k, kr = modelled(nu)
        c_diff = (kr[-1] - k[-1]) * a_nu(last, N)
        rem = c_diff * N / math.pi**2 * float(zeta(2.0, last + 0.5))
        return math.fsum(terms) + rem

    full = continuation(tail_factor * nu_max)
    half = continuation(tail_factor * nu_max // 2)
    mismatch = abs(math.fsum(t[last_tenth] - modelled(s.nu[last_tenth])[0]))
    return KernelSum(partial + full, partial, full, abs(full - half) + mismatch, nu_max)
