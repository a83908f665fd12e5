import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from magsim.bessel import X_MAX, bessel_j
from magsim.core_model import symplectic_form
from magsim.errors import InstabilityError, InvalidArgumentError
from magsim.modulation import (
    EffectiveCouplings,
    ModulationSpec,
    bogoliubov_parameters,
    common_period,
    default_truncation,
    effective_couplings,
    field_to_modulation,
    hop_phase_rate,
    jacobi_anger_closure,
    pair_phase_rate,
    resonant_modulation_frequencies,
    rotating_frame_rotation,
    single_sphere_hamiltonian_rwa,
    time_dependent_couplings,
    two_sphere_hamiltonian_rwa,
)

orders = st.integers(-30, 30)
args = st.floats(-X_MAX, X_MAX, allow_nan=False)


# Bessel -------------------------------------------------------------------------


@pytest.mark.parametrize("n,x", [(0, 0.16), (-1, 0.16), (1, 3.8317), (0, 3.8317), (5, 12.0),
                                 (0, 30.0), (17, 44.5), (3, 8.0), (3, 8.0001)])
def test_bessel_against_mpmath(n, x):
    ref = float(mpmath.besselj(n, mpmath.mpf(x)))
    assert bessel_j(n, x) == pytest.approx(ref, abs=2e-14)


@settings(max_examples=300, deadline=None)
@given(orders, args)
def test_bessel_against_scipy(n, x):
    assert abs(bessel_j(n, x) - jv(n, x)) < 5e-14


@settings(max_examples=200, deadline=None)
@given(orders, args)
def test_bessel_symmetries(n, x):
    sign = -1.0 if n % 2 else 1.0
    assert bessel_j(-n, x) == pytest.approx(sign * bessel_j(n, x), abs=1e-15)
    assert bessel_j(n, -x) == pytest.approx(sign * bessel_j(n, x), abs=1e-15)


def test_bessel_domain():
    assert bessel_j(0, 0.0) == 1.0 and bessel_j(4, 0.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        bessel_j(1.5, 1.0)
    with pytest.raises(InvalidArgumentError):
        bessel_j(0, 60.0)
    with pytest.raises(InvalidArgumentError):
        bessel_j(0, float("nan"))


def test_bessel_zero():
    assert abs(bessel_j(1, 3.8317059702)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 4), st.floats(-math.pi, math.pi))
def test_jacobi_anger_expansion(lam, theta):
    Z = default_truncation([lam])
    series = sum(bessel_j(z, lam) * cmath.exp(1j * z * theta) for z in range(-Z, Z + 1))
    assert abs(series - cmath.exp(1j * lam * math.sin(theta))) < 1e-10


@pytest.mark.parametrize("lam", [0.04, 0.2, 0.3, 3.8317])
def test_closure_with_default_truncation(lam):
    assert abs(jacobi_anger_closure(lam, default_truncation([lam])) - 1.0) < 1e-10


def test_default_truncation_grows_for_large_index():
    assert default_truncation([0.3]) == 8
    assert default_truncation([3.8317]) > 8


# couplings ----------------------------------------------------------------------


def test_bae_coupling_value():
    eff = effective_couplings(1.0, 0.16, 0.16)
    assert eff.g1 == eff.g2
    assert eff.g1 == pytest.approx(jv(0, 0.16) * jv(-1, 0.16), abs=1e-15)


def test_zero_modulation_decouples():
    eff = effective_couplings(1.0, 0.0, 0.0)
    assert eff.g1 == 0 and eff.g2 == 0


def test_resonant_frequencies_select_stationary_sidebands():
    nu1, nu2 = resonant_modulation_frequencies(0.45, 1.0)
    assert (nu1, nu2) == pytest.approx((0.55, 1.45))
    assert pair_phase_rate(0, -1, 0.45, 1.0) == 0
    assert hop_phase_rate(-1, 0, 0.45, 1.0) == 0
    assert pair_phase_rate(0, 0, 0.45, 1.0) != 0
    with pytest.raises(InvalidArgumentError):
        resonant_modulation_frequencies(1.0, 0.5)


def test_field_to_modulation():
    gamma = 2 * math.pi * 28e9
    om, lams = field_to_modulation(0.1, [1e-4], [2 * math.pi * 1e9])
    assert om == pytest.approx(gamma * 0.1)
    assert lams[0] == pytest.approx(gamma * 1e-4 / (2 * math.pi * 1e9))
    with pytest.raises(InvalidArgumentError):
        field_to_modulation(0.0, [1e-4], [1.0])


def test_period_average_of_rotating_couplings_is_rwa():
    spec = ModulationSpec.resonant(0.2, 0.12, 0.45, 1.0)
    T = common_period(spec.nus + (spec.omega_s, spec.omega_r))
    t = np.linspace(0, T, 20001)[:-1]
    g1t, g2t = np.array([time_dependent_couplings(spec, 1.0, x, 12) for x in t]).T
    eff = effective_couplings(1.0, 0.2, 0.12)
    assert np.mean(g1t) == pytest.approx(eff.g1, abs=1e-12)
    assert np.mean(g2t) == pytest.approx(eff.g2, abs=1e-12)


def test_common_period():
    assert common_period([0.55, 1.45, 0.45, 1.0]) == pytest.approx(2 * math.pi / 0.05)
    assert common_period([2.15, 4.85, 0.85, 3.5, 0.85]) == pytest.approx(2 * math.pi / 0.05)
    assert common_period([1.0, math.sqrt(2)]) is None


def test_bogoliubov_parameters():
    r, om = bogoliubov_parameters(0.6, 1.0)
    assert r == pytest.approx(math.atanh(0.6)) and om == pytest.approx(0.8)
    with pytest.raises(InstabilityError):
        bogoliubov_parameters(1.0, 1.0)


def test_rwa_hamiltonians():
    M = single_sphere_hamiltonian_rwa(EffectiveCouplings(0.0, 0.0)).at(0.0)
    assert np.allclose(M, 0)
    with pytest.raises(InvalidArgumentError):
        two_sphere_hamiltonian_rwa(0.01, 0.0, 0.02, omega_c=0.8, omega_m2=0.85)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1e5), st.floats(0, 4), st.floats(0, 0.5), st.floats(-3, 3))
def test_frame_rotation_is_symplectic(t, l1, l2, phi):
    spec = ModulationSpec.resonant(l1, l2, 0.85, 1.0, phi, -phi)
    S = rotating_frame_rotation(t, spec, (0.85,))
    Om = symplectic_form(3)
    assert np.allclose(S @ Om @ S.T, Om, atol=1e-13)
    assert np.allclose(S @ S.T, np.eye(6), atol=1e-13)
