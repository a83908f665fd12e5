"""Mode layout, quadratic Hamiltonians, baths and covariance states.

Quadratures are ordered mode by mode, ``(X_1, P_1, X_2, P_2, ...)`` with
``X = (o + o^dag)/sqrt(2)`` and ``P = -i(o - o^dag)/sqrt(2)``, so the vacuum
covariance is ``I/2``.  A quadratic Hamiltonian is stored as the real
symmetric matrix ``M`` of ``H = u^T M u / 2``; the Heisenberg drift is then
``Omega @ M`` and losses subtract ``kappa/2`` on both quadratures of a mode.

All frequencies and rates are in units of the (first) magnon frequency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import constants

from .errors import InvalidArgumentError, InvalidStateError

UNCERTAINTY_TOL = 1e-9
SYMMETRY_RTOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModeLayout:
    """Ordered, uniquely labelled bosonic modes."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise InvalidArgumentError("a layout needs at least one mode")
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError(f"mode labels must be unique, got {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 2 * len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown mode {label!r}; layout has {self.labels}"
            ) from None

    def quadrature_indices(self, labels: Sequence[str]) -> list:
        """Row/column indices of the X and P quadratures of the named modes."""
        out = []
        for lab in labels:
            k = self.index(lab)
            out.extend((2 * k, 2 * k + 1))
        return out


SINGLE_SPHERE = ModeLayout(("c", "m"))
TWO_SPHERE = ModeLayout(("c", "m1", "m2"))


def default_layout(n_modes: int) -> ModeLayout:
    if n_modes == 2:
        return SINGLE_SPHERE
    if n_modes == 3:
        return TWO_SPHERE
    return ModeLayout(tuple(f"o{k}" for k in range(n_modes)))


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with 2x2 blocks ``[[0, 1], [-1, 0]]``."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise InvalidArgumentError(f"n_modes must be a positive integer, got {n_modes}")
    return np.kron(np.eye(int(n_modes)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_symmetric(m, what):
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError(f"{what} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
        raise InvalidArgumentError(f"{what} is not symmetric")


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric matrix ``M`` of ``H = u^T M u / 2``, constant or time dependent.

    Exactly one of ``matrix`` and ``evaluator`` is set.  ``evaluator(t)`` must
    return a symmetric ``2N x 2N`` array.
    """

    matrix: Optional[np.ndarray] = None
    evaluator: Optional[Callable[[float], np.ndarray]] = None
    n_modes: int = 0

    def __post_init__(self):
        if (self.matrix is None) == (self.evaluator is None):
            raise InvalidArgumentError("give exactly one of matrix or evaluator")
        if self.matrix is not None:
            m = _frozen(self.matrix)
            if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
                raise InvalidArgumentError(f"matrix must be 2N x 2N, got {m.shape}")
            _check_symmetric(m, "Hamiltonian matrix")
            object.__setattr__(self, "matrix", m)
            object.__setattr__(self, "n_modes", m.shape[0] // 2)
        elif self.n_modes < 1:
            raise InvalidArgumentError("time-dependent forms need n_modes")

    @property
    def is_time_dependent(self) -> bool:
        return self.evaluator is not None

    def at(self, t: float) -> np.ndarray:
        if self.evaluator is None:
            return self.matrix
        return np.asarray(self.evaluator(t), dtype=float)


def ladder_to_quadratic(hopping, pairing=None) -> np.ndarray:
    """Quadrature matrix of a Hamiltonian written in ladder operators.

    ``H = sum_ij hopping[i, j] a_i^dag a_j
    + 1/2 sum_ij (pairing[i, j] a_i^dag a_j^dag + h.c.)``, up to a constant.

    Args:
        hopping: Hermitian ``N x N`` complex matrix.
        pairing: symmetric ``N x N`` complex matrix (default zero).

    Returns:
        Real symmetric ``2N x 2N`` matrix in interleaved quadrature order.
    """
    h = np.asarray(hopping, dtype=complex)
    n = h.shape[0]
    k = np.zeros((n, n), complex) if pairing is None else np.asarray(pairing, complex)
    if np.max(np.abs(h - h.conj().T), initial=0.0) > 1e-14 * max(1.0, np.abs(h).max()):
        raise InvalidArgumentError("hopping matrix must be Hermitian")
    if np.max(np.abs(k - k.T), initial=0.0) > 1e-14 * max(1.0, np.abs(k).max()):
        raise InvalidArgumentError("pairing matrix must be symmetric")
    xx = h.real + k.real
    pp = h.real - k.real
    xp = -h.imag + k.imag
    m = np.empty((2 * n, 2 * n))
    m[0::2, 0::2] = xx
    m[1::2, 1::2] = pp
    m[0::2, 1::2] = xp
    m[1::2, 0::2] = xp.T
    return m


@dataclass(frozen=True)
class BathSpec:
    """Per-mode decay rate and mean thermal occupation."""

    kappa: tuple
    n_bar: tuple

    def __post_init__(self):
        kappa = tuple(float(x) for x in np.atleast_1d(self.kappa))
        n_bar = tuple(float(x) for x in np.atleast_1d(self.n_bar))
        if len(n_bar) == 1 and len(kappa) > 1:
            n_bar = n_bar * len(kappa)
        if len(kappa) != len(n_bar):
            raise InvalidArgumentError("kappa and n_bar must have one entry per mode")
        if any(not np.isfinite(x) or x < 0 for x in kappa + n_bar):
            raise InvalidArgumentError("kappa and n_bar must be finite and >= 0")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "n_bar", n_bar)

    @property
    def n_modes(self) -> int:
        return len(self.kappa)


def _as_matrix(M):
    if isinstance(M, QuadraticForm):
        if M.is_time_dependent:
            raise InvalidArgumentError("evaluate a time-dependent form with .at(t) first")
        return M.matrix
    return np.asarray(M, dtype=float)


def drift_from_hamiltonian(M, baths: BathSpec) -> np.ndarray:
    """Drift ``A = Omega @ M - diag(kappa/2)`` of the quadrature Langevin equations."""
    m = _as_matrix(M)
    if m.shape != (2 * baths.n_modes, 2 * baths.n_modes):
        raise InvalidArgumentError(
            f"Hamiltonian is {m.shape} but baths describe {baths.n_modes} modes"
        )
    damping = np.repeat(np.asarray(baths.kappa) / 2.0, 2)
    return symplectic_form(baths.n_modes) @ m - np.diag(damping)


def drift_evaluator(H: QuadraticForm, baths: BathSpec):
    """Constant drift array, or a callable ``A(t)`` for a time-dependent form."""
    if not H.is_time_dependent:
        return drift_from_hamiltonian(H, baths)
    if H.n_modes != baths.n_modes:
        raise InvalidArgumentError("Hamiltonian and baths disagree on the mode count")
    omega = symplectic_form(baths.n_modes)
    damping = np.diag(np.repeat(np.asarray(baths.kappa) / 2.0, 2))

    def drift(t):
        return omega @ H.at(t) - damping

    return drift


def diffusion_from_baths(baths: BathSpec) -> np.ndarray:
    """Diagonal diffusion ``kappa (n_bar + 1/2)`` on both quadratures of each mode."""
    k = np.asarray(baths.kappa)
    n = np.asarray(baths.n_bar)
    return np.diag(np.repeat(k * (n + 0.5), 2))


def thermal_occupation(omega: float, T: float) -> float:
    """Bose occupation ``1/(exp(hbar omega / k_B T) - 1)``.

    Args:
        omega: angular frequency in rad/s.
        T: temperature in kelvin.
    """
    if not omega > 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    if T < 0:
        raise InvalidArgumentError(f"temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    return float(1.0 / np.expm1(constants.hbar * omega / (constants.k * T)))


def uncertainty_margin(sigma: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``sigma + (i/2) Omega``."""
    omega = symplectic_form(sigma.shape[0] // 2)
    return float(np.linalg.eigvalsh(sigma + 0.5j * omega).min())


@dataclass(frozen=True)
class CovarianceState:
    """Symmetric quadrature covariance matrix at time ``t``.

    Construction checks symmetry, positivity and the uncertainty relation
    unless ``check`` is false (used internally for samples already vetted at
    a looser tolerance).
    """

    sigma: np.ndarray
    t: float = 0.0
    layout: Optional[ModeLayout] = None
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        s = _frozen(self.sigma)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InvalidStateError(f"covariance must be 2N x 2N, got {s.shape}")
        layout = self.layout or default_layout(s.shape[0] // 2)
        if layout.dim != s.shape[0]:
            raise InvalidStateError("layout does not match the covariance dimension")
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "t", float(self.t))
        if self.check:
            validate_covariance(s)

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2


def validate_covariance(sigma: np.ndarray, tol: float = UNCERTAINTY_TOL) -> None:
    """Raise :class:`InvalidStateError` unless ``sigma`` is a physical covariance."""
    if not np.all(np.isfinite(sigma)):
        raise InvalidStateError("covariance has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(sigma))))
    if np.max(np.abs(sigma - sigma.T)) > 1e-9 * scale:
        raise InvalidStateError("covariance is not symmetric")
    margin = uncertainty_margin(sigma)
    if margin < -tol * scale:
        raise InvalidStateError(f"uncertainty relation violated by {-margin:.3e}")
    if np.linalg.eigvalsh(sigma).min() <= 0:
        raise InvalidStateError("covariance is not positive definite")


def vacuum(layout) -> CovarianceState:
    """Joint vacuum ``I/2`` for a layout or a mode count."""
    if not isinstance(layout, ModeLayout):
        layout = default_layout(int(layout))
    return CovarianceState(0.5 * np.eye(layout.dim), 0.0, layout)
