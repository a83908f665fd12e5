import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from magsim.core_model import symplectic_form
from magsim.errors import InvalidStateError
from magsim.measures import (
    is_squeezed,
    log_negativity,
    min_pt_symplectic_eigenvalue,
    min_pt_symplectic_eigenvalue_closed,
    optimal_squeezing,
    symplectic_eigenvalues,
)
from magsim.scenarios import (
    analytic_squeezed_vacuum,
    analytic_two_mode_squeezed_thermal,
    two_mode_squeezer,
)


def standard_form_nu_minus(a, b, c):
    """nu~- for the standard form diag blocks a I, b I and correlations diag(c, -c)."""
    return 0.5 * ((a + b) - math.sqrt((a - b) ** 2 + 4 * c * c))


def tmst_standard_form(r, alpha, beta):
    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return alpha * ch2 + beta * sh2, alpha * sh2 + beta * ch2, (alpha + beta) * math.cosh(r) * math.sinh(r)


def random_state(entries, occupations):
    H = np.zeros((4, 4))
    H[np.triu_indices(4)] = entries
    H = H + H.T
    S = expm(symplectic_form(2) @ H)
    return S @ np.diag(np.repeat(np.asarray(occupations) + 0.5, 2)) @ S.T


def test_vacuum_values():
    assert optimal_squeezing(0.5 * np.eye(2)) == 0.5
    assert not is_squeezed(0.5 * np.eye(2))
    assert log_negativity(0.5 * np.eye(4)) == 0.0


@pytest.mark.parametrize("r", [0.0, 0.3, math.atanh(0.6), 1.5])
def test_squeezed_vacuum(r):
    assert optimal_squeezing(analytic_squeezed_vacuum(r)) == pytest.approx(math.exp(-2 * r) / 2)


def test_bogoliubov_squeezing_value():
    assert optimal_squeezing(analytic_squeezed_vacuum(math.atanh(0.6))) == pytest.approx(0.125, abs=1e-15)


def test_rotated_squeezing_finds_the_minimum():
    th = 0.7
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    s = R @ analytic_squeezed_vacuum(0.4) @ R.T
    assert optimal_squeezing(s) == pytest.approx(math.exp(-0.8) / 2, abs=1e-14)
    assert s[0, 0] > optimal_squeezing(s)


def test_thermal_symplectic_eigenvalues():
    s = np.diag([1.5, 1.5, 0.7, 0.7])
    assert symplectic_eigenvalues(s) == pytest.approx([0.7, 1.5])


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 3))
def test_two_mode_squeezed_vacuum_negativity_is_2r(r):
    S = two_mode_squeezer(r)
    sigma = S @ (0.5 * np.eye(4)) @ S.T
    assert log_negativity(sigma) == pytest.approx(2 * r, abs=1e-9)
    assert log_negativity(sigma, method="closed") == pytest.approx(2 * r, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-0.6, 0.6), min_size=10, max_size=10),
       st.tuples(st.floats(0, 2), st.floats(0, 2)))
def test_closed_form_matches_eigen_route(entries, occ):
    sigma = random_state(entries, occ)
    a = min_pt_symplectic_eigenvalue(sigma)
    b = min_pt_symplectic_eigenvalue_closed(sigma)
    assert abs(a - b) <= 1e-10 * max(1.0, np.abs(sigma).max())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-0.6, 0.6), min_size=10, max_size=10),
       st.tuples(st.floats(0, 2), st.floats(0, 2)))
def test_symplectic_spectrum_is_invariant(entries, occ):
    sigma = random_state(entries, occ)
    assert symplectic_eigenvalues(sigma) == pytest.approx(sorted(np.asarray(occ) + 0.5), abs=1e-8)


def test_product_states_are_not_entangled():
    s = np.zeros((4, 4))
    s[:2, :2] = analytic_squeezed_vacuum(0.8)
    s[2:, 2:] = analytic_squeezed_vacuum(-0.3)
    # pure product state: nu = 1/2 up to rounding
    assert log_negativity(s) == pytest.approx(0.0, abs=1e-14)
    s[2:, 2:] *= 3.0
    assert log_negativity(s) == 0.0


def test_tmst_against_standard_form():
    r2 = math.atanh(0.4)
    sigma = analytic_two_mode_squeezed_thermal(r2)
    a, b, c = tmst_standard_form(r2, 0.5, math.sinh(r2) ** 2 + 0.5)
    assert sigma[0, 0] == pytest.approx(a) and sigma[2, 2] == pytest.approx(b)
    assert abs(sigma[0, 2]) == pytest.approx(c)
    oracle = -math.log(2 * standard_form_nu_minus(a, b, c))
    assert log_negativity(sigma) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.702, abs=3e-3)


def test_invalid_inputs():
    with pytest.raises(InvalidStateError):
        optimal_squeezing(np.eye(4))
    with pytest.raises(InvalidStateError):
        log_negativity(np.eye(2))
    with pytest.raises(InvalidStateError):
        log_negativity(-np.eye(4))
    with pytest.raises(ValueError):
        log_negativity(0.5 * np.eye(4), method="nope")
