"""
Trace formulae and inverse-scattering tools for Schroedinger operators with
the boundary singularity -1/(4 z^2) + v_minus1/z.

Submodules
----------
specfun    Gamma, Bessel J0/J1 and zeros, 1F1, Whittaker M, 2F1, orthogonal polynomials
potential  Potentials v = v_sg + u with Laurent data and the builtin examples
regsol     Regular solution phi ~ sqrt(z), scattering amplitude and phase
spectrum   Eigenvalues and norms on [0, N], asymptotic models
trace      Finite-interval and half-line trace formulae for v0
kernels    Povzner-Levitan / Gel'fand-Levitan kernel expansions
cli        Command-line front end
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, IntegrationError, PoleError, SingTraceError,
                     SpectrumError)
from .potential import LaurentData, Potential, RegularPart, builtin
from .regsol import (BoundState, ScatteringData, closed_scattering, integrate_regular,
                     numeric_scattering)
from .spectrum import IntervalSpectrum, closed_spectrum, shoot_spectrum
from .trace import QuadPolicy, corollary_v0, finite_interval_v0, halfline_v0_difference

__all__ = [
    "__version__",
    "SingTraceError", "PoleError", "ConvergenceError", "DomainError", "IntegrationError", "SpectrumError",
    "LaurentData", "Potential", "RegularPart", "builtin",
    "BoundState", "ScatteringData", "closed_scattering", "integrate_regular", "numeric_scattering",
    "IntervalSpectrum", "closed_spectrum", "shoot_spectrum",
    "QuadPolicy", "corollary_v0", "finite_interval_v0", "halfline_v0_difference",
]
