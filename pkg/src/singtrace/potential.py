"""
Potentials with the boundary singularity -1/(4 z^2) + v_{-1}/z.

A potential is split as v(z) = v_sg(z) + u(z) where

    v_sg(z) = -1/(4 z^2) + v_minus1 / z

is handled analytically and u is a regular part that has a finite limit
v0 = u(0).  On a symmetric interval [0, N] the potential is evaluated on
(0, N/2] and mirrored, so v(z) = v(N - z) holds bit for bit and the mirrored
singular part appears at z = N automatically.

The notation v_sg is also written v^(c) in some of the literature; both
denote the same fixed near-boundary terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

__all__ = [
    "RegularPart",
    "Potential",
    "LaurentData",
    "BUILTIN_CASES",
    "builtin",
]

REGULAR_KINDS = ("zero", "sinh_well", "trig_rosen_morse", "taylor", "tabulated")
BUILTIN_CASES = ("v1", "vtilde1", "vtilde2", "vtilde3", "v4", "vtilde4")

_NSERIES = 16


def _bernoulli_even(n_max: int):
    """Exact B_0, B_2, ..., B_{2 n_max} (scipy's table is only float accurate)."""
    b = [Fraction(1)]
    for m in range(1, 2 * n_max + 1):
        b.append(-sum(Fraction(math.comb(m + 1, j)) * b[j] for j in range(m)) / (m + 1))
    return b[0::2]


_B2N = _bernoulli_even(_NSERIES)


def _pole_free_coeffs(alternating: bool) -> np.ndarray:
    """Taylor coefficients c_m (of w^{2m}) for 1/w^2 - csch^2 w, or 1/w^2 - 1/sin^2 w."""
    out = np.empty(_NSERIES)
    for m in range(_NSERIES):
        n = m + 1
        c = Fraction(2 ** (2 * n) * (2 * n - 1), math.factorial(2 * n)) * _B2N[n]
        if alternating:
            c *= (-1) ** n
        out[m] = float(c)
    return out


_SINH_C = _pole_free_coeffs(False)
_SIN_C = _pole_free_coeffs(True)
_SERIES_SWITCH = 0.5


def _even_series(coeffs, w):
    w2 = w * w
    return np.polynomial.polynomial.polyval(w2, coeffs)


@dataclass(frozen=True)
class LaurentData:
    """Coefficients of v(z) = -1/(4z^2) + v_minus1/z + v0 + v1 z + v2 z^2 + v3 z^3 + v4 z^4 + ..."""

    v_minus1: float
    v0: float
    v1: float
    v2: float
    v4: float
    v3: float = 0.0


@dataclass(frozen=True)
class RegularPart:
    """Regular part u(z) of a potential.

    Parameters
    ----------
    kind : str
        One of ``zero``, ``sinh_well`` (u = -1/(4 sinh^2 z) + 1/(4 z^2)),
        ``trig_rosen_morse`` (u = -(pi/N)^2 / (4 sin^2(pi z/N)) + 1/(4 z^2)),
        ``taylor`` (u = sum coeffs[j] z^j) or ``tabulated`` (monotone cubic
        interpolation of ``values`` on ``grid``).
    """

    kind: str = "zero"
    coeffs: tuple = ()
    grid: tuple = ()
    values: tuple = ()
    N: float = 1.0
    _interp: Optional[PchipInterpolator] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in REGULAR_KINDS:
            raise DomainError(f"unknown regular part kind {self.kind!r}")
        if self.kind == "taylor" and len(self.coeffs) == 0:
            raise DomainError("taylor regular part needs at least one coefficient")
        if self.kind == "tabulated":
            g = np.asarray(self.grid, dtype=float)
            if g.size < 2 or g.size != len(self.values) or np.any(np.diff(g) <= 0):
                raise DomainError("tabulated regular part needs a strictly increasing grid matching values")
            object.__setattr__(self, "_interp", PchipInterpolator(g, np.asarray(self.values, float),
                                                                  extrapolate=False))
        if self.kind == "trig_rosen_morse" and not self.N > 0:
            raise DomainError("trig_rosen_morse needs N > 0")

    @property
    def analytic(self) -> bool:
        return self.kind != "tabulated"

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(z)
        elif self.kind == "sinh_well":
            out = np.empty_like(z)
            near = np.abs(z) < _SERIES_SWITCH
            out[near] = 0.25 * _even_series(_SINH_C, z[near])
            zf = z[~near]
            out[~near] = -0.25 / np.sinh(zf) ** 2 + 0.25 / zf**2
        elif self.kind == "trig_rosen_morse":
            s = math.pi / self.N
            w = s * z
            out = np.empty_like(z)
            near = np.abs(w) < _SERIES_SWITCH
            out[near] = 0.25 * s * s * _even_series(_SIN_C, w[near])
            wf = w[~near]
            out[~near] = 0.25 * s * s * (1.0 / wf**2 - 1.0 / np.sin(wf) ** 2)
        elif self.kind == "taylor":
            out = np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs, float))
        else:
            lo, hi = self.grid[0], self.grid[-1]
            if np.any(z < lo) or np.any(z > hi):
                raise DomainError(f"tabulated regular part evaluated outside [{lo}, {hi}]")
            out = self._interp(z)
        return out if out.ndim else float(out)

    def taylor_coefficients(self, n: int) -> np.ndarray:
        """Coefficients u_0..u_n of the Taylor expansion of u at z = 0."""
        out = np.zeros(n + 1)
        if self.kind == "zero":
            return out
        if self.kind == "taylor":
            c = np.asarray(self.coeffs, float)[: n + 1]
            out[: c.size] = c
            return out
        if self.kind == "tabulated":
            raise DomainError("tabulated regular parts have no Taylor expansion")
        if self.kind == "sinh_well":
            base, scale = _SINH_C, 1.0
        else:
            base, scale = _SIN_C, math.pi / self.N
        for m in range(min(_NSERIES, n // 2 + 1)):
            out[2 * m] = 0.25 * scale ** (2 * m + 2) * base[m]
        return out

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "taylor":
            d["coeffs"] = [float(c) for c in self.coeffs]
        elif self.kind == "tabulated":
            d["grid"] = [float(g) for g in self.grid]
            d["values"] = [float(v) for v in self.values]
        elif self.kind == "trig_rosen_morse":
            d["N"] = float(self.N)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RegularPart":
        kind = d.get("kind")
        if kind not in REGULAR_KINDS:
            raise DomainError(f"unknown regular part kind {kind!r}")
        return cls(kind=kind, coeffs=tuple(d.get("coeffs", ())), grid=tuple(d.get("grid", ())),
                   values=tuple(d.get("values", ())), N=float(d.get("N", 1.0)))


@dataclass(frozen=True)
class Potential:
    """v(z) = -1/(4z^2) + v_minus1/z + u(z) on the half-line (N=None) or on [0, N].

    Attributes
    ----------
    v_minus1 : float
        Coefficient of 1/z.
    regular : RegularPart
        The regular part u.
    N : float or None
        Interval length, or None for the half-line.
    symmetric : bool
        Interval case only: evaluate on (0, N/2] and mirror.
    name : str
        Optional label used in reports.
    """

    v_minus1: float = 0.0
    regular: RegularPart = field(default_factory=RegularPart)
    N: Optional[float] = None
    symmetric: bool = False
    name: str = ""

    def __post_init__(self):
        if not math.isfinite(self.v_minus1):
            raise DomainError("v_minus1 must be finite")
        if self.N is not None and not (self.N > 0 and math.isfinite(self.N)):
            raise DomainError(f"interval length must be positive, got {self.N}")
        if self.symmetric and self.N is None:
            raise DomainError("symmetric potentials need a finite interval")

    @property
    def is_interval(self) -> bool:
        return self.N is not None

    def _fold(self, z):
        z = np.asarray(z, dtype=float)
        if np.any(z <= 0) or (self.N is not None and np.any(z >= self.N)):
            raise DomainError("potential evaluated outside the open domain")
        if self.symmetric:
            z = np.where(z > 0.5 * self.N, self.N - z, z)
        return z

    def singular(self, z):
        """The fixed part -1/(4z^2) + v_minus1/z (no mirroring)."""
        z = np.asarray(z, dtype=float)
        out = -0.25 / z**2 + self.v_minus1 / z
        return out if out.ndim else float(out)

    def eval(self, z):
        """v(z) at interior points of the domain."""
        zf = self._fold(z)
        out = -0.25 / zf**2 + self.v_minus1 / zf + np.asarray(self.regular(zf))
        return out if out.ndim else float(out)

    __call__ = eval

    def regular_part(self, z):
        """u(z) = v(z) - v_sg(z) at folded z, evaluated without cancellation."""
        out = np.asarray(self.regular(self._fold(z)))
        return out if out.ndim else float(out)

    def taylor_coefficients(self, n: int) -> np.ndarray:
        return self.regular.taylor_coefficients(n)

    def laurent(self) -> LaurentData:
        """Exact Laurent data at z = 0."""
        if not self.regular.analytic:
            raise DomainError("Laurent data needs an analytic regular part")
        c = self.taylor_coefficients(4)
        return LaurentData(v_minus1=float(self.v_minus1), v0=float(c[0]), v1=float(c[1]), v2=float(c[2]),
                           v4=float(c[4]), v3=float(c[3]))

    def far_field(self):
        """(c2, c1) with v ~ c2/z^2 + c1/z at large z on the half-line."""
        if self.is_interval:
            raise DomainError("far field is only defined on the half-line")
        if self.regular.kind == "zero":
            return -0.25, self.v_minus1
        if self.regular.kind == "sinh_well":
            # u cancels the 1/(4z^2) up to exponentially small terms
            return 0.0, self.v_minus1
        raise DomainError(f"regular part {self.regular.kind!r} has no decaying far field")

    def u_integral(self) -> float:
        """Integral of u over (0, N/2] for symmetric intervals, (0, N] otherwise."""
        if not self.is_interval:
            raise DomainError("u_integral needs a finite interval")
        upper = 0.5 * self.N if self.symmetric else self.N
        val, _ = quad(lambda t: float(self.regular(t)), 0.0, upper, epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    def to_dict(self) -> dict:
        return {
            "v_minus1": float(self.v_minus1),
            "regular": self.regular.to_dict(),
            "domain": "half_line" if self.N is None else {"interval": float(self.N)},
            "symmetric": bool(self.symmetric),
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Potential":
        try:
            dom = d.get("domain", "half_line")
            N = None if dom == "half_line" else float(dom["interval"])
            return cls(v_minus1=float(d.get("v_minus1", 0.0)),
                       regular=RegularPart.from_dict(d.get("regular", {"kind": "zero"})),
                       N=N, symmetric=bool(d.get("symmetric", False)), name=str(d.get("name", "")))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed potential description: {exc}") from exc


def builtin(case: str) -> Potential:
    """The six reference potentials.

    ``v1``      sinh well -1/(4 sinh^2 z) on the half-line
    ``vtilde1`` pure -1/(4 z^2)
    ``vtilde2`` -1/(4 z^2) + 4/(pi^2 z)
    ``vtilde3`` -1/(4 z^2) - 4/(pi^2 z)
    ``v4``      -pi^2/(4 sin^2(pi z)) on [0, 1]
    ``vtilde4`` -1/(4 z^2) on [0, 1/2], mirrored about 1/2
    """
    c = 4.0 / math.pi**2
    table = {
        "v1": lambda: Potential(0.0, RegularPart("sinh_well"), name="v1"),
        "vtilde1": lambda: Potential(0.0, RegularPart("zero"), name="vtilde1"),
        "vtilde2": lambda: Potential(c, RegularPart("zero"), name="vtilde2"),
        "vtilde3": lambda: Potential(-c, RegularPart("zero"), name="vtilde3"),
        "v4": lambda: Potential(0.0, RegularPart("trig_rosen_morse", N=1.0), N=1.0, symmetric=True, name="v4"),
        "vtilde4": lambda: Potential(0.0, RegularPart("zero"), N=1.0, symmetric=True, name="vtilde4"),
    }
    if case not in table:
        raise DomainError(f"unknown builtin potential {case!r}; choose from {', '.join(BUILTIN_CASES)}")
    return table[case]()
