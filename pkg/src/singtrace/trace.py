"""
Trace formulae for v0, the regular part of the potential at the boundary.

Finite interval [0, N], symmetric potential v with reference v_ring = v_sg:

    v0 = 2 sum_nu (1/kappa_ring_nu - 1/kappa_nu) + (2/N) int_0^{N/2} (v - v_sg) dz

Half-line, potentials v and v_tilde with the same singular part:

    v0 - v0_tilde = (4/pi) int_0^inf k^2 [exp(-2 sigma_tilde) - exp(-2 sigma)] dk
                    + sum 2/kappa_tilde - sum 2/kappa

Without bound states the second form reduces to the integral alone
(``corollary_v0``), which covers the sinh well and the arctan amplitude.  Scattering data supply exp(-2 sigma) - pi/(2k) directly, so the
integrand is formed without the cancellation that a naive difference of two
~pi/(2k) terms would suffer at large k.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .errors import ConvergenceError, DomainError
from .potential import Potential
from .regsol import BoundState, ScatteringData
from .spectrum import BoundStateSeries, IntervalSpectrum

__all__ = [
    "QuadPolicy",
    "TraceResultFinite",
    "TraceResultHalfLine",
    "finite_interval_v0",
    "halfline_v0_difference",
    "corollary_v0",
    "classical_gl_check",
    "fit_power_tail",
]


@dataclass(frozen=True)
class QuadPolicy:
    """Quadrature settings for the half-line integrals."""

    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    k_split: float = 1.0
    k_max: float = 200.0
    limit: int = 400

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if not (0 < self.k_split < self.k_max):
            raise DomainError("need 0 < k_split < k_max")


@dataclass(frozen=True)
class TraceResultFinite:
    """v0 = 2 (series_partial + tail_estimate) + integral_term."""

    v0: float
    series_partial: float
    tail_estimate: float
    integral_term: float
    nu_max: int
    error_estimate: float = 0.0
    settings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"v0": d.pop("v0"), "error_estimate": d.pop("error_estimate"),
                "settings": d.pop("settings"), "components": d}


@dataclass(frozen=True)
class TraceResultHalfLine:
    """v0_diff = integral + tail + bound_sum_tilde - bound_sum."""

    v0_diff: float
    integral: float
    bound_sum: float
    bound_sum_tilde: float
    k_max: float
    tail: float
    error_estimate: float = 0.0
    settings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"v0": d.pop("v0_diff"), "error_estimate": d.pop("error_estimate"),
                "settings": d.pop("settings"), "components": d}


# --------------------------------------------------------------------------
# Tail fits
# --------------------------------------------------------------------------

def fit_power_tail(j: np.ndarray, terms: np.ndarray, powers: Sequence[int], j_last: int) -> float:
    """Least-squares fit terms ~ sum_p c_p j^-p, then sum the model over j > j_last.

    The sums use Hurwitz zeta values, so no truncation is involved.
    """
    j = np.asarray(j, dtype=float)
    basis = np.column_stack([j ** (-float(p)) for p in powers])
    scale = np.abs(basis).max(axis=0)
    coef, *_ = np.linalg.lstsq(basis / scale, terms, rcond=None)
    coef = coef / scale
    return float(sum(c * zeta(float(p), j_last + 1.0) for c, p in zip(coef, powers)))


# --------------------------------------------------------------------------
# Finite interval
# --------------------------------------------------------------------------

def finite_interval_v0(spec: IntervalSpectrum, spec_ring: IntervalSpectrum, p: Potential,
                       nu_max: Optional[int] = None, tail: bool = True,
                       p_ring: Optional[Potential] = None) -> TraceResultFinite:
    """v0 from the two spectra.

    Terms 1/kappa_ring - 1/kappa are summed in pairs (nu = 2j-1, 2j); the
    pairs decay algebraically and the remainder is estimated from a fit of
    c2/j^2 + ... + c5/j^5 over the last decade of pairs.  The error estimate
    is the spread between that fit and one with the highest power dropped.
    With ``p_ring`` the integral of its regular part is subtracted as well,
    which gives v0 - v0_ring for two arbitrary potentials.

    Raises
    ------
    DomainError
        If the spectra differ in length, interval or parity ordering.
    ConvergenceError
        If the tail estimate exceeds the change of the partial sum over
        the last decade.
    """
    if nu_max is None:
        nu_max = min(len(spec), len(spec_ring))
    if len(spec) < nu_max or len(spec_ring) < nu_max:
        raise DomainError("spectra are shorter than nu_max")
    if spec.N != spec_ring.N or (p.N is not None and p.N != spec.N):
        raise DomainError("spectra and potential refer to different intervals")
    if tuple(spec.parity[:nu_max]) != tuple(spec_ring.parity[:nu_max]):
        raise DomainError("spectra have inconsistent parity ordering")
    N = spec.N
    n_pairs = nu_max // 2
    used = 2 * n_pairs if tail else nu_max
    d = spec_ring.reduced_inv_kappa[:used] - spec.reduced_inv_kappa[:used]
    partial = math.fsum(d)
    tail_est = 0.0
    err = 0.0
    if tail and n_pairs >= 20:
        pairs = d[0::2] + d[1::2]
        j = np.arange(1, n_pairs + 1)
        sel = j > n_pairs // 10
        t_full = fit_power_tail(j[sel], pairs[sel], (2, 3, 4, 5), n_pairs)
        t_low = fit_power_tail(j[sel], pairs[sel], (2, 3, 4), n_pairs)
        tail_est = t_full
        err = abs(t_full - t_low)
        change = abs(math.fsum(pairs[sel]))
        if abs(tail_est) > change and abs(tail_est) > 1e-15:
            raise ConvergenceError("tail estimate exceeds the partial-sum change over the last decade")
    u_int = p.u_integral()
    if p_ring is not None:
        u_int -= p_ring.u_integral()
    integral_term = 2.0 / N * u_int
    v0 = 2.0 * (partial + tail_est) + integral_term
    return TraceResultFinite(v0, partial, tail_est, integral_term, used, 2.0 * err,
                             {"tail_model": "pairs, powers 2..5" if tail else "none"})


# --------------------------------------------------------------------------
# Half-line
# --------------------------------------------------------------------------

BoundInput = Union[Sequence[BoundState], BoundStateSeries, None]


def _bound_sum(bound: BoundInput) -> float:
    if bound is None:
        return 0.0
    if isinstance(bound, BoundStateSeries):
        return bound.sum_two_over_kappa()
    return math.fsum(2.0 / b.kappa for b in bound)


def _tail_fit(h: Callable, k_max: float):
    """Fit h ~ c2/k^2 + c4/k^4 beyond k_max; returns both tail integrals for error control."""
    ks = k_max * np.array([1.0, 1.25, 1.5, 2.0, 3.0, 4.0])
    vals = np.array([h(k) for k in ks])
    b2 = np.column_stack([ks**-2.0, ks**-4.0])
    c, *_ = np.linalg.lstsq(b2 * ks[:, None] ** 2, vals * ks**2, rcond=None)
    t2 = c[0] / k_max + c[1] / (3.0 * k_max**3)
    c1, *_ = np.linalg.lstsq(np.ones((ks.size, 1)), vals * ks**2, rcond=None)
    t1 = c1[0] / k_max
    return t2, abs(t2 - t1)


def halfline_v0_difference(sigma: ScatteringData, sigma_tilde: ScatteringData,
                           bound: BoundInput = (), bound_tilde: BoundInput = (),
                           quad_policy: QuadPolicy = QuadPolicy()) -> TraceResultHalfLine:
    """v0 - v0_tilde for two half-line problems with the same singular part.

    The integral is split at k_split and evaluated by adaptive Gauss-Kronrod
    up to k_max; beyond that the integrand is fitted to c2/k^2 + c4/k^4 and
    integrated in closed form.  Numeric scattering data end at their support;
    past it the integrand is taken as zero (suitable for short-range
    potentials whose excess decays exponentially) and the tail is reported
    as zero.
    """
    if sigma.v_minus1 != sigma_tilde.v_minus1:
        raise DomainError("both potentials must share the same singular part")
    q = quad_policy
    k_end = min(q.k_max, sigma.k_support[1], sigma_tilde.k_support[1])

    def h(k):
        return 4.0 / math.pi * k * k * float(sigma_tilde.excess(k) - sigma.excess(k))

    pieces = []
    errs = []
    for a, b in ((0.0, min(q.k_split, k_end)), (min(q.k_split, k_end), k_end)):
        if b > a:
            val, err = quad(h, a, b, epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.limit)
            pieces.append(val)
            errs.append(err)
    integral = math.fsum(pieces)
    tail = 0.0
    tail_err = 0.0
    if k_end == q.k_max and math.isinf(sigma.k_support[1]) and math.isinf(sigma_tilde.k_support[1]):
        tail, tail_err = _tail_fit(h, q.k_max)
        if not math.isfinite(tail):
            raise ConvergenceError("divergent integrand tail")
    bsum = _bound_sum(bound)
    bsum_t = _bound_sum(bound_tilde)
    v0 = integral + tail + bsum_t - bsum
    return TraceResultHalfLine(v0, integral, bsum, bsum_t, k_end, tail, sum(errs) + tail_err,
                               {"rel_tol": q.rel_tol, "abs_tol": q.abs_tol, "k_split": q.k_split,
                                "k_max": q.k_max})


def corollary_v0(sigma: ScatteringData, sigma_tilde: ScatteringData,
                 quad_policy: QuadPolicy = QuadPolicy()) -> float:
    """(4/pi) int k^2 [exp(-2 sigma_tilde) - exp(-2 sigma)] dk, for problems without bound states."""
    return halfline_v0_difference(sigma, sigma_tilde, (), (), quad_policy).v0_diff


# --------------------------------------------------------------------------
# Classical Dirichlet trace formula (cross-check)
# --------------------------------------------------------------------------

def classical_gl_check(eigenvalues: Sequence[float], potential: Optional[Callable] = None,
                       tail: bool = True) -> float:
    """sum_nu (nu^2 pi^2 - eps_nu) for a nonsingular potential on [0, 1] with zero mean.

    The value should equal (v(0) + v(1))/4.  The remainder of the series is
    estimated from a c2/nu^2 + c4/nu^4 fit over the last decade of terms.
    """
    if potential is not None:
        mean, _ = quad(lambda z: float(potential(z)), 0.0, 1.0, epsabs=1e-13, limit=200)
        if abs(mean) > 1e-10:
            raise DomainError(f"potential must have zero mean, got {mean:.3e}")
    eps = np.asarray(eigenvalues, dtype=float)
    nu = np.arange(1, eps.size + 1)
    terms = (nu * math.pi) ** 2 - eps
    total = math.fsum(terms)
    if tail and eps.size >= 20:
        sel = nu > eps.size // 10
        total += fit_power_tail(nu[sel], terms[sel], (2, 4), eps.size)
    return total
