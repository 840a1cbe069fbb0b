import math

import numpy as np
import pytest

from singtrace.errors import ConvergenceError, DomainError
from singtrace.kernels import (
    gl_kernel_even,
    gl_residual_even,
    kernel_from_spectra,
    p2_ode_residual,
    p_general,
    pl_coeffs_even,
    pl_linear_system,
    ringed_bessel_eigenfunction,
    v0_from_kernel,
)
from singtrace.potential import builtin
from singtrace.spectrum import TailModel, closed_spectrum

PI = math.pi


@pytest.fixture(scope="module")
def spectra():
    return closed_spectrum("v4", 1600), closed_spectrum("vtilde4", 1600)


@pytest.fixture(scope="module")
def tails():
    return TailModel.from_potential(builtin("v4")), TailModel.from_potential(builtin("vtilde4"))


class TestEvenExpansion:
    def test_pure_constant(self):
        e = pl_coeffs_even(2.0, 0.0, 0.0)
        assert e.P == pytest.approx((1.0, 0.25, -0.25, 1 / 48, -1 / 24, 1 / 48), abs=1e-16)

    def test_zero(self):
        e = pl_coeffs_even(0.0, 0.0, 0.0)
        assert e.P == (0.0,) * 6 and all(k == 0 for k in e.K)

    @pytest.mark.parametrize("v0", [-1.5, 0.3, 2.0])
    def test_difference_independent_of_v2(self, v0):
        e = pl_coeffs_even(v0, 12.0, 0.0)
        assert e.P[1] - e.P[2] == pytest.approx(v0**2 / 8, rel=1e-14)

    def test_linear_system_random(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for v0, v2, v4 in rng.uniform(-3, 3, size=(100, 3)):
            A, b = pl_linear_system(v0, v2, v4)
            P = np.array(pl_coeffs_even(v0, v2, v4).P)
            worst = max(worst, float(np.max(np.abs(A @ P - b))))
        assert worst <= 1e-14

    def test_kernel_diagonal_leading_term(self):
        z = 1e-3
        assert gl_kernel_even(0.7, 0.2, -0.1, z, z) == pytest.approx(-0.35 * z, rel=1e-5)

    def test_kernel_regime(self):
        with pytest.warns(RuntimeWarning):
            gl_kernel_even(1.0, 0.0, 0.0, 0.5, 0.2)
        with pytest.raises(DomainError):
            gl_kernel_even(1.0, 0.0, 0.0, 0.1, 0.2)

    def test_k_is_symmetric(self):
        e = pl_coeffs_even(0.9, -0.4, 1.1)
        assert e.k_value(0.1, 0.07) / math.sqrt(0.1 * 0.07) == pytest.approx(
            e.k_value(0.07, 0.1) / math.sqrt(0.07 * 0.1), rel=1e-15)

    def test_gl_residual_order(self):
        r1 = gl_residual_even(1.0, 0.0, 0.0, 0.1, 0.05)
        r2 = gl_residual_even(1.0, 0.0, 0.0, 0.05, 0.025)
        assert r1 < 1e-4
        assert r1 / r2 >= 16

    def test_gl_residual_zero(self):
        assert gl_residual_even(0.0, 0.0, 0.0, 0.1, 0.05) == 0.0

    def test_recovery(self):
        # 2 d/dz P(z, z) reproduces v0 + v2 z^2 + v4 z^4 through z^4
        v0, v2, v4 = 0.8, -1.3, 2.1
        e = pl_coeffs_even(v0, v2, v4)
        for z in (0.02, 0.05):
            h = 1e-6
            dP = (e.p_value(z + h, z + h) - e.p_value(z - h, z - h)) / (2 * h)
            u = v0 + v2 * z**2 + v4 * z**4
            assert abs(2 * dP - u) < 50 * z**6 + 1e-8


class TestGeneralExpansion:
    def test_no_coulomb_no_p2(self):
        assert p_general(0.4, 1.3, 0.0, 0.0)[1] == 0.0

    def test_p1(self):
        assert p_general(0.36, 2.0, 0.5, 0.1)[0] == pytest.approx(0.6, rel=1e-15)

    def test_small_rho_limit(self):
        v0, vm1, v1 = 0.7, 0.4, -0.3
        rho = 1e-6
        lim = PI * (v1 - 4 * v0 * vm1) / 16 + v0 * vm1 / 2
        assert p_general(rho, v0, vm1, v1)[1] / math.sqrt(rho) == pytest.approx(lim, rel=1e-5)

    @pytest.mark.parametrize("rho", [0.1, 0.35, 0.6, 0.9])
    def test_p2_solves_its_equation(self, rho):
        assert abs(p2_ode_residual(rho, 0.7, 4 / PI**2, -0.3)) <= 1e-9

    def test_p2_matches_finite_differences(self):
        from singtrace.kernels import _p2_derivatives
        rho, h = 0.4, 1e-4
        p = lambda r: p_general(r, 0.7, 0.4, -0.3)[1]  # noqa: E731
        _, d1, d2 = _p2_derivatives(rho, 0.7, 0.4, -0.3)
        assert d1 == pytest.approx((p(rho + h) - p(rho - h)) / (2 * h), rel=1e-7)
        assert d2 == pytest.approx((p(rho + h) - 2 * p(rho) + p(rho - h)) / h**2, rel=1e-5)

    def test_rho_range(self):
        with pytest.raises(DomainError):
            p_general(0.0, 1.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            p2_ode_residual(1.0, 1.0, 0.0, 0.0)


class TestV0FromKernel:
    def test_linear(self):
        v, err = v0_from_kernel(lambda z: -(1 / 24) * z)
        assert v == pytest.approx(1 / 12, abs=1e-15)
        assert err < 1e-15

    def test_quadratic_correction(self):
        v, _ = v0_from_kernel(lambda z: -0.5 * z + 3.0 * z**2)
        assert v == pytest.approx(1.0, abs=1e-13)

    def test_nonconvergent(self):
        with pytest.raises(ConvergenceError):
            v0_from_kernel(lambda z: math.sin(1 / z))

    def test_too_few_levels(self):
        with pytest.raises(DomainError):
            v0_from_kernel(lambda z: z, levels=3)


class TestKernelFromSpectra:
    def test_identical_spectra(self, spectra):
        s = spectra[1]
        assert kernel_from_spectra(0.1, 0.2, s, s).value == 0.0

    def test_identical_spectra_with_tails(self, spectra, tails):
        s, t = spectra[1], tails[1]
        assert kernel_from_spectra(0.1, 0.2, s, s, tail=t, tail_ring=t).value == 0.0

    def test_truncation_trend(self, spectra):
        errs = [abs(-2 * kernel_from_spectra(0.05, 0.05, *spectra, nu_max=n).value / 0.05 + PI**2 / 12)
                for n in (100, 400, 1600)]
        assert errs[0] > errs[1] > errs[2]

    @pytest.mark.parametrize("z", [0.05, 0.1])
    def test_matches_series(self, spectra, tails, z):
        # v4 has v2 = -pi^4/60, v4 = -pi^6/378; the series is exact up to O(z^6.5)
        d = builtin("v4").laurent()
        k = kernel_from_spectra(z, z, *spectra, tail=tails[0], tail_ring=tails[1])
        assert abs(k.value - gl_kernel_even(d.v0, d.v2, d.v4, z, z)) < z**6.5
        assert k.error < 1e-8

    def test_square_root_behaviour(self, spectra, tails):
        s = np.geomspace(1e-3, 1e-2, 6)
        vals = [kernel_from_spectra(0.01, x, *spectra, tail=tails[0], tail_ring=tails[1]).value for x in s]
        slope = np.polyfit(np.log(s), np.log(np.abs(vals)), 1)[0]
        assert slope == pytest.approx(0.5, abs=0.05)

    def test_domain(self, spectra):
        with pytest.raises(DomainError):
            kernel_from_spectra(0.0, 0.1, *spectra)
        with pytest.raises(DomainError):
            kernel_from_spectra(0.1, 0.1, *spectra, nu_max=5000)

    def test_eigenfunction(self):
        assert ringed_bessel_eigenfunction(4.0, 0.0) == 2.0
