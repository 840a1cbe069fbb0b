import math

import numpy as np
import pytest

from singtrace.errors import DomainError
from singtrace.potential import Potential, RegularPart, builtin
from singtrace.spectrum import (
    TailModel,
    a_nu,
    asymptotic_k,
    asymptotic_kappa,
    closed_spectrum,
    dirichlet_spectrum,
    shoot_spectrum,
)

PI = math.pi

# mpmath at 40 digits: k_nu and r_nu = 1/kappa_nu - pi a_nu for the mirrored singular reference
VTILDE4_MP = {
    1: (1.8815411278994747, 0.054169438998126919),
    2: (4.8096511153915455, 0.037116141203889414),
    7: (20.44491679327738, -0.00056717276555738385),
    100: (312.59006853706705, 2.3993454614106099e-7),
    1001: (3143.1636089920163, -1.6861497921446949e-10),
}


@pytest.fixture(scope="module")
def shot_vtilde4():
    return shoot_spectrum(builtin("vtilde4"), 40)


class TestClosed:
    def test_v4(self):
        s = closed_spectrum("v4", 5)
        assert np.allclose(s.k, PI * (np.arange(1, 6) - 0.5), rtol=1e-15)
        assert np.allclose(s.kappa, 1 / (PI**2 * (np.arange(1, 6) - 0.5)), rtol=1e-15)
        assert np.all(s.reduced_inv_kappa == 0)
        assert s.parity == ("even", "odd", "even", "odd", "even")

    @pytest.mark.parametrize("nu", sorted(VTILDE4_MP))
    def test_vtilde4_against_mpmath(self, nu):
        k_ref, r_ref = VTILDE4_MP[nu]
        s = closed_spectrum("vtilde4", nu)
        assert s.k[-1] == pytest.approx(k_ref, rel=1e-15)
        assert abs(s.reduced_inv_kappa[-1] - r_ref) < 1e-15 * max(1.0, PI * a_nu(nu))

    def test_bound_series(self):
        b = closed_spectrum("vtilde3_bound", 3)
        assert b.energy[0] == pytest.approx(-16 / PI**4, rel=1e-15)
        assert b.kappa[1] == pytest.approx(PI**4 * 27 / 64, rel=1e-15)
        # sum 2/kappa = (128/pi^4) (7/8) zeta(3)
        from scipy.special import zeta
        assert b.sum_two_over_kappa() == pytest.approx(112 / PI**4 * zeta(3), rel=1e-14)
        assert len(b.states()) == 3

    def test_truncate(self):
        s = closed_spectrum("vtilde4", 10).truncate(4)
        assert len(s) == 4 and s.nu[-1] == 4

    def test_errors(self):
        with pytest.raises(DomainError):
            closed_spectrum("v7", 3)
        with pytest.raises(DomainError):
            closed_spectrum("v4", 0)
        with pytest.raises(DomainError):
            closed_spectrum("v4", 3, N=2.0)


class TestShooting:
    def test_vtilde4_matches_closed(self, shot_vtilde4):
        c = closed_spectrum("vtilde4", 40)
        assert np.max(np.abs(shot_vtilde4.k - c.k)) < 1e-10
        assert np.max(np.abs(shot_vtilde4.kappa / c.kappa - 1)) < 1e-10
        assert shot_vtilde4.parity == c.parity

    def test_v4_matches_closed(self):
        s = shoot_spectrum(builtin("v4"), 12)
        c = closed_spectrum("v4", 12)
        assert np.max(np.abs(s.k - c.k)) < 1e-10
        assert np.max(np.abs(s.kappa / c.kappa - 1)) < 1e-10

    def test_window(self):
        s = shoot_spectrum(builtin("vtilde4"), 8, nu_min=5)
        assert list(s.nu) == [5, 6, 7, 8]
        assert s.k == pytest.approx(closed_spectrum("vtilde4", 8).k[4:], abs=1e-10)

    def test_needs_symmetric_interval(self):
        with pytest.raises(DomainError):
            shoot_spectrum(builtin("v1"), 3)
        with pytest.raises(DomainError):
            shoot_spectrum(builtin("v4"), 0)


class TestAsymptotics:
    def test_reference_error_is_third_order(self):
        tm = TailModel.from_potential(builtin("vtilde4"))
        nu = np.arange(50, 201)
        err = np.abs(closed_spectrum("vtilde4", 200).k[49:] - asymptotic_k(tm, nu))
        assert np.max(err * a_nu(nu) ** 3) < 2.0

    def test_v4_with_integral_term(self):
        # the integral of u is -1/2, so k = a exactly
        tm = TailModel.from_potential(builtin("v4"))
        nu = np.arange(1, 30)
        assert np.allclose(asymptotic_k(tm, nu, ringed=False), closed_spectrum("v4", 29).k, rtol=1e-14)

    def test_kappa_leading_order(self):
        tm = TailModel(1.0)
        nu = np.arange(100, 110)
        assert np.allclose(asymptotic_kappa(tm, nu), closed_spectrum("vtilde4", 109).kappa[99:], rtol=1e-4)

    def test_nu_validation(self):
        with pytest.raises(DomainError):
            asymptotic_k(TailModel(1.0), 0)

    def test_tail_model_needs_interval(self):
        with pytest.raises(DomainError):
            TailModel.from_potential(builtin("v1"))


class TestDirichlet:
    def test_free(self):
        e = dirichlet_spectrum(lambda z: 0.0 * z, 5)
        assert np.allclose(e, (PI * np.arange(1, 6)) ** 2, rtol=1e-12)

    def test_constant_shift(self):
        e = dirichlet_spectrum(lambda z: 3.0 + 0.0 * z, 4)
        assert np.allclose(e, (PI * np.arange(1, 5)) ** 2 + 3.0, rtol=1e-11)

    def test_length(self):
        e = dirichlet_spectrum(lambda z: 0.0 * z, 3, length=2.0)
        assert np.allclose(e, (PI * np.arange(1, 4) / 2) ** 2, rtol=1e-12)
