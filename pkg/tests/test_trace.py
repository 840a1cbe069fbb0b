import math

import numpy as np
import pytest
from scipy.special import zeta

from singtrace.errors import DomainError
from singtrace.potential import builtin
from singtrace.regsol import BoundState, closed_scattering, numeric_scattering
from singtrace.spectrum import IntervalSpectrum, closed_spectrum, dirichlet_spectrum
from singtrace.trace import (
    QuadPolicy,
    classical_gl_check,
    corollary_v0,
    finite_interval_v0,
    fit_power_tail,
    halfline_v0_difference,
)

PI = math.pi
Z3 = 56 * zeta(3) / PI**4


class TestHalfLine:
    def test_sinh_well_closed(self):
        v0 = corollary_v0(closed_scattering("v1"), closed_scattering("vtilde1"))
        assert abs(v0 - 1 / 12) < 1e-10

    def test_arctan_amplitude(self):
        r = halfline_v0_difference(closed_scattering("v2"), closed_scattering("vtilde2"))
        assert abs(r.v0_diff - (Z3 - 1)) < 1e-8
        # mpmath: 56 zeta(3)/pi^4 - 1
        assert r.v0_diff == pytest.approx(-0.308943489130684, abs=1e-8)

    def test_k_max_doubling_invariance(self):
        a = corollary_v0(closed_scattering("v2"), closed_scattering("vtilde2"), QuadPolicy(k_max=200.0))
        b = corollary_v0(closed_scattering("v2"), closed_scattering("vtilde2"), QuadPolicy(k_max=400.0))
        assert abs(a - b) < 1e-10

    def test_with_bound_states(self):
        bound = closed_spectrum("vtilde3_bound", 1000)
        r = halfline_v0_difference(closed_scattering("v3"), closed_scattering("vtilde3"), (), bound)
        assert abs(r.v0_diff - Z3) < 1e-8
        assert abs(r.integral + r.tail + Z3) < 1e-7
        assert abs(r.bound_sum_tilde - 2 * Z3) < 1e-7
        assert r.bound_sum == 0.0

    def test_bound_state_list(self):
        s = closed_scattering("vtilde1")
        r = halfline_v0_difference(s, s, [BoundState(1, -1.0, 4.0)], [BoundState(1, -2.0, 2.0)])
        assert r.v0_diff == pytest.approx(1.0 - 0.5, abs=1e-15)

    def test_identical_data_give_zero(self):
        s = closed_scattering("vtilde2")
        assert halfline_v0_difference(s, s).v0_diff == 0.0

    def test_singular_parts_must_agree(self):
        with pytest.raises(DomainError):
            halfline_v0_difference(closed_scattering("v1"), closed_scattering("vtilde2"))

    def test_numeric_sinh_well(self):
        v0 = corollary_v0(numeric_scattering(builtin("v1")), closed_scattering("vtilde1"))
        assert abs(v0 - 1 / 12) < 1e-6

    def test_policy_validation(self):
        with pytest.raises(DomainError):
            QuadPolicy(k_split=0.0)
        with pytest.raises(DomainError):
            QuadPolicy(rel_tol=0.0)

    def test_result_dict(self):
        d = halfline_v0_difference(closed_scattering("v1"), closed_scattering("vtilde1")).to_dict()
        assert set(d) == {"v0", "error_estimate", "settings", "components"}
        assert "integral" in d["components"]


@pytest.fixture(scope="module")
def spectra():
    return closed_spectrum("v4", 10000), closed_spectrum("vtilde4", 10000)


class TestFiniteInterval:
    def test_trig_rosen_morse_with_tail(self, spectra):
        r = finite_interval_v0(*spectra, builtin("v4"))
        assert abs(abs(r.v0) - PI**2 / 12) < 1e-9 * PI**2 / 12
        assert r.v0 < 0
        assert r.integral_term == pytest.approx(-1.0, abs=1e-12)
        assert r.error_estimate < 1e-9

    def test_trig_rosen_morse_without_tail(self, spectra):
        s, sr = (x.truncate(1000) for x in spectra)
        r = finite_interval_v0(s, sr, builtin("v4"), tail=False)
        assert abs(r.v0 + PI**2 / 12) < 1e-4
        assert r.tail_estimate == 0.0

    def test_tail_improves_partial_sum(self, spectra):
        s, sr = (x.truncate(1000) for x in spectra)
        plain = finite_interval_v0(s, sr, builtin("v4"), tail=False).v0
        fitted = finite_interval_v0(s, sr, builtin("v4")).v0
        assert abs(fitted + PI**2 / 12) < abs(plain + PI**2 / 12)

    def test_identical_spectra(self):
        s = closed_spectrum("vtilde4", 200)
        r = finite_interval_v0(s, s, builtin("vtilde4"))
        assert r.v0 == 0.0

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            finite_interval_v0(closed_spectrum("v4", 10), closed_spectrum("vtilde4", 10), builtin("v4"), nu_max=20)

    def test_parity_mismatch(self):
        s = closed_spectrum("vtilde4", 4)
        flipped = IntervalSpectrum(s.N, s.nu, s.k, ("odd", "even", "odd", "even"), s.kappa,
                                   s.reduced_inv_kappa, "flipped")
        with pytest.raises(DomainError):
            finite_interval_v0(closed_spectrum("v4", 4), flipped, builtin("v4"))


class TestTailFit:
    def test_exact_model_is_summed_exactly(self):
        j = np.arange(50, 101)
        terms = 3.0 / j**2 - 2.0 / j**3
        t = fit_power_tail(j, terms, (2, 3), 100)
        assert t == pytest.approx(3 * zeta(2, 101) - 2 * zeta(3, 101), rel=1e-12)


class TestClassicalCheck:
    def test_cosine_potential(self):
        v = lambda z: np.cos(2 * PI * z)  # noqa: E731
        eps = dirichlet_spectrum(v, 50)
        assert abs(classical_gl_check(eps, v) - 0.5) < 1e-6

    def test_free(self):
        nu = np.arange(1, 30)
        assert classical_gl_check((nu * PI) ** 2) == 0.0

    def test_nonzero_mean_rejected(self):
        with pytest.raises(DomainError):
            classical_gl_check([PI**2], lambda z: 1.0 + 0.0 * z)
