"""Squeezing and entanglement measures for Gaussian covariance matrices."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core_model import CovarianceState, symplectic_form
from .errors import InvalidStateError

PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def reduce(state: CovarianceState, modes: Sequence[str]) -> np.ndarray:
    """Principal submatrix of the named modes, in quadrature order."""
    idx = state.layout.quadrature_indices(modes)
    return state.sigma[np.ix_(idx, idx)].copy()


def optimal_squeezing(reduced) -> float:
    """Smallest quadrature variance of a single mode (``< 1/2`` means squeezed)."""
    s = np.asarray(reduced, dtype=float)
    if s.shape != (2, 2):
        raise InvalidStateError(f"single-mode covariance must be 2x2, got {s.shape}")
    if abs(s[0, 1] - s[1, 0]) > 1e-9 * max(1.0, np.abs(s).max()):
        raise InvalidStateError("single-mode covariance is not symmetric")
    v = float(np.linalg.eigvalsh(0.5 * (s + s.T))[0])
    if not v > 0:
        raise InvalidStateError("single-mode covariance is not positive definite")
    return v


def is_squeezed(reduced) -> bool:
    return optimal_squeezing(reduced) < 0.5


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """The N symplectic eigenvalues, ascending: moduli of the spectrum of ``i Omega Sigma``."""
    s = np.asarray(sigma, dtype=float)
    n = s.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ s)))
    # eigenvalues come in +-nu pairs
    return 0.5 * (ev[0::2] + ev[1::2])


def _check_two_mode(s):
    if s.shape != (4, 4):
        raise InvalidStateError(f"two-mode covariance must be 4x4, got {s.shape}")
    if not np.all(np.isfinite(s)) or np.max(np.abs(s - s.T)) > 1e-9 * max(1.0, np.abs(s).max()):
        raise InvalidStateError("two-mode covariance is not finite and symmetric")
    if np.linalg.eigvalsh(0.5 * (s + s.T))[0] <= 0:
        raise InvalidStateError("two-mode covariance is not positive definite")


def min_pt_symplectic_eigenvalue(reduced) -> float:
    """Smallest symplectic eigenvalue after partial transposition of the second mode."""
    s = np.asarray(reduced, dtype=float)
    _check_two_mode(s)
    return float(symplectic_eigenvalues(PARTIAL_TRANSPOSE @ s @ PARTIAL_TRANSPOSE)[0])


def _det_exact(rows):
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det


def min_pt_symplectic_eigenvalue_closed(reduced) -> float:
    """Same quantity from the 2x2 block determinants.

    ``nu^2`` is the smaller root of ``x^2 - Delta x + det Sigma`` with
    ``Delta = det A + det B - 2 det C``.  The determinants are evaluated
    exactly on the (binary-rational) input and the root is taken as
    ``2 det Sigma / (Delta + sqrt(Delta^2 - 4 det Sigma))``, so nearly
    degenerate spectra do not lose half the digits.
    """
    s = np.asarray(reduced, dtype=float)
    _check_two_mode(s)
    q = [[Fraction(float(x)) for x in row] for row in 0.5 * (s + s.T)]
    det2 = lambda i, j: q[i][j] * q[i + 1][j + 1] - q[i][j + 1] * q[i + 1][j]
    delta = det2(0, 0) + det2(2, 2) - 2 * det2(0, 2)
    det = _det_exact(q)
    disc = max(delta * delta - 4 * det, Fraction(0))
    denom = float(delta) + math.sqrt(disc)
    if not denom > 0:
        raise InvalidStateError("partially transposed covariance is degenerate")
    return math.sqrt(max(2.0 * float(det) / denom, 0.0))


def log_negativity(reduced, method="eigen") -> float:
    """``max(0, -ln(2 nu))`` with ``nu`` the smallest partially-transposed symplectic eigenvalue."""
    if method == "eigen":
        nu = min_pt_symplectic_eigenvalue(reduced)
    elif method == "closed":
        nu = min_pt_symplectic_eigenvalue_closed(reduced)
    else:
        raise ValueError(f"unknown method {method!r}")
    if nu <= 0:
        raise InvalidStateError("partially transposed covariance is singular")
    return max(0.0, -math.log(2.0 * nu))
