"""Two-tone frequency modulation of the magnon mode.

The magnon frequency is modulated as ``omega_m + sum_j lambda_j nu_j
cos(nu_j t + phi_j)``.  In the frame rotating the cavity at ``omega_s`` and
the magnon at ``omega_r t + sum_j lambda_j sin(nu_j t + phi_j)`` the
cavity-magnon coupling becomes a double Jacobi-Anger sum.  Tuning
``nu_1 = omega_r - omega_s`` and ``nu_2 = omega_r + omega_s`` leaves one
resonant pair-creation term and one resonant exchange term with couplings

    g1 = g J_0(lambda_1) J_{-1}(lambda_2),   g2 = g J_{-1}(lambda_1) J_0(lambda_2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .bessel import bessel_j
from .core_model import QuadraticForm, ladder_to_quadratic
from .errors import InstabilityError, InvalidArgumentError

GYROMAGNETIC_RATIO = 2 * math.pi * 28e9  # rad s^-1 T^-1
DEFAULT_TRUNCATION = 8


@dataclass(frozen=True)
class ModulationSpec:
    """Two modulation tones and the rotating-frame frequencies (units of omega_m)."""

    lambda1: float
    lambda2: float
    nu1: float
    nu2: float
    phi1: float = 0.0
    phi2: float = 0.0
    omega_s: float = 0.0
    omega_r: float = 0.0

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise InvalidArgumentError("modulation indices must be >= 0")
        if not (self.nu1 > 0 and self.nu2 > 0):
            raise InvalidArgumentError("modulation frequencies must be > 0")

    @classmethod
    def resonant(cls, lambda1, lambda2, omega_s, omega_r, phi1=0.0, phi2=0.0):
        """Resonant tones ``nu_1 = omega_r - omega_s`` and ``nu_2 = omega_r + omega_s``."""
        nu1, nu2 = resonant_modulation_frequencies(omega_s, omega_r)
        return cls(lambda1, lambda2, nu1, nu2, phi1, phi2, omega_s, omega_r)

    @property
    def lambdas(self):
        return (self.lambda1, self.lambda2)

    @property
    def nus(self):
        return (self.nu1, self.nu2)

    @property
    def phis(self):
        return (self.phi1, self.phi2)

    def magnon_shift(self, t):
        """Instantaneous frequency offset ``sum_j lambda_j nu_j cos(nu_j t + phi_j)``."""
        return sum(lam * nu * np.cos(nu * t + phi)
                   for lam, nu, phi in zip(self.lambdas, self.nus, self.phis))

    def magnon_phase(self, t):
        """Frame angle ``omega_r t + sum_j lambda_j sin(nu_j t + phi_j)``."""
        return self.omega_r * t + sum(lam * np.sin(nu * t + phi)
                                      for lam, nu, phi in zip(self.lambdas, self.nus, self.phis))


@dataclass(frozen=True)
class EffectiveCouplings:
    """Signed resonant couplings; ``g3`` is the static second-sphere coupling."""

    g1: float
    g2: float
    g3: Optional[float] = None


@dataclass(frozen=True)
class SingleSphere:
    omega_c: float
    omega_m: float
    g: float


@dataclass(frozen=True)
class TwoSphere:
    omega_c: float
    omega_m1: float
    omega_m2: float
    g: float
    g3: float


def field_to_modulation(B0, Bj, nuj):
    """Magnon frequency and modulation indices from bias and modulation fields.

    Args:
        B0: static bias field in tesla.
        Bj: modulation amplitudes in tesla.
        nuj: modulation angular frequencies in rad/s.

    Returns:
        ``(omega_m, [lambda_j])`` with ``omega_m = gamma B0`` in rad/s and
        ``lambda_j = gamma B_j / nu_j``.
    """
    if not B0 > 0:
        raise InvalidArgumentError("B0 must be positive")
    Bj = list(Bj)
    nuj = list(nuj)
    if len(Bj) != len(nuj):
        raise InvalidArgumentError("one modulation frequency per amplitude")
    if any(b < 0 for b in Bj) or any(not nu > 0 for nu in nuj):
        raise InvalidArgumentError("amplitudes must be >= 0 and frequencies > 0")
    omega_m = GYROMAGNETIC_RATIO * B0
    return omega_m, [GYROMAGNETIC_RATIO * b / nu for b, nu in zip(Bj, nuj)]


def resonant_modulation_frequencies(omega_s, omega_r):
    if not omega_s > 0:
        raise InvalidArgumentError("omega_s must be positive")
    if not omega_r > omega_s:
        raise InvalidArgumentError("need omega_r > omega_s so that nu_1 > 0")
    nu1, nu2 = omega_r - omega_s, omega_r + omega_s
    # selected sidebands must be exactly stationary
    assert pair_phase_rate(0, -1, omega_s, omega_r) == 0.0
    assert hop_phase_rate(-1, 0, omega_s, omega_r) == 0.0
    return nu1, nu2


def pair_phase_rate(z1, z2, omega_s, omega_r):
    """Oscillation rate of the ``(z1, z2)`` sideband of the pair-creation coupling."""
    return (1 - z1 + z2) * omega_s + (1 + z1 + z2) * omega_r


def hop_phase_rate(n1, n2, omega_s, omega_r):
    """Oscillation rate of the ``(n1, n2)`` sideband of the exchange coupling."""
    return (1 + n1 - n2) * omega_s - (1 + n1 + n2) * omega_r


def effective_couplings(g, lambda1, lambda2, g3=None) -> EffectiveCouplings:
    return EffectiveCouplings(
        g1=g * bessel_j(0, lambda1) * bessel_j(-1, lambda2),
        g2=g * bessel_j(-1, lambda1) * bessel_j(0, lambda2),
        g3=g3,
    )


def jacobi_anger_closure(lam, truncation):
    """``sum_{|n| <= Z} J_n(lam)^2``; equals one for an adequate truncation."""
    return math.fsum(bessel_j(n, lam) ** 2 for n in range(-truncation, truncation + 1))


def default_truncation(lambdas, tol=1e-12):
    """Smallest ``Z >= 8`` whose dropped sidebands sum to at most ``tol``.

    The sideband sums are linear in ``J_z``, so the bound is on
    ``sum_{|z| > Z} |J_z|`` rather than on the closure of squares (which
    would stop much earlier).
    """
    z = DEFAULT_TRUNCATION
    for lam in lambdas:
        while 2.0 * math.fsum(abs(bessel_j(k, lam)) for k in range(z + 1, z + 30)) > tol:
            z += 1
    return z


class _Sidebands:
    """Truncated ``sum_z J_z(lambda) exp(-i z (nu t + phi))`` for each tone."""

    def __init__(self, spec: ModulationSpec, truncation: int):
        if truncation < 1:
            raise InvalidArgumentError("truncation must be >= 1")
        self.spec = spec
        self.z = np.arange(-truncation, truncation + 1)
        self.amps = [np.array([bessel_j(int(k), lam) for k in self.z]) for lam in spec.lambdas]

    def __call__(self, t):
        """Return ``S(t) = sum_{z1,z2} J_z1 J_z2 exp(-i(z1 (nu1 t+phi1) + z2 (nu2 t+phi2)))``."""
        out = 1.0 + 0j
        for amp, nu, phi in zip(self.amps, self.spec.nus, self.spec.phis):
            out = out * np.dot(amp, np.exp(-1j * self.z * (nu * t + phi)))
        return out


def time_dependent_couplings(spec: ModulationSpec, g, t, truncation=DEFAULT_TRUNCATION):
    """Rotating-frame couplings ``(g_1t, g_2t)`` from the truncated double sums.

    ``g_1t`` multiplies ``m c`` and ``g_2t`` multiplies ``m^dag c``; their
    Hermitian conjugates multiply ``m^dag c^dag`` and ``m c^dag``.
    The double sum over ``z1, z2`` factorises into a product of two single
    sums, which is how it is evaluated.
    """
    side = _Sidebands(spec, truncation)
    s = side(t)
    g1t = g * np.exp(-1j * (spec.omega_s + spec.omega_r) * t) * s
    # exchange sum carries +z phases: conjugate of the same factor
    g2t = g * np.exp(-1j * (spec.omega_s - spec.omega_r) * t) * np.conj(s)
    return g1t, g2t


def _single_hopping(omega_c, omega_m, g_hop, g_pair):
    hop = np.array([[omega_c, np.conj(g_hop)], [g_hop, omega_m]], dtype=complex)
    pair = np.array([[0.0, g_pair], [g_pair, 0.0]], dtype=complex)
    return hop, pair


def single_sphere_hamiltonian_lab(t, system: SingleSphere, spec: ModulationSpec) -> QuadraticForm:
    """Lab-frame ``omega_c c^dag c + omega_m(t) m^dag m + g (c + c^dag)(m + m^dag)``."""
    hop, pair = _single_hopping(system.omega_c, system.omega_m + spec.magnon_shift(t),
                                system.g, system.g)
    return QuadraticForm(ladder_to_quadratic(hop, pair))


def single_sphere_lab_form(system: SingleSphere, spec: ModulationSpec) -> QuadraticForm:
    static = single_sphere_hamiltonian_lab(0.0, system, _unmodulated(spec)).matrix.copy()

    def evaluate(t):
        m = static.copy()
        shift = spec.magnon_shift(t)
        m[2, 2] += shift
        m[3, 3] += shift
        return m

    return QuadraticForm(evaluator=evaluate, n_modes=2)


def _unmodulated(spec):
    return ModulationSpec(0.0, 0.0, spec.nu1, spec.nu2, spec.phi1, spec.phi2,
                          spec.omega_s, spec.omega_r)


def single_sphere_hamiltonian_rwa(effective: EffectiveCouplings, deltas=(0.0, 0.0),
                                  phases=(0.0, 0.0)) -> QuadraticForm:
    """Resonant Hamiltonian ``delta_c c^dag c + delta_m m^dag m
    + (g1 e^{i phi2} m + g2 e^{-i phi1} m^dag) c + h.c.``"""
    delta_c, delta_m = deltas
    phi1, phi2 = phases
    hop, pair = _single_hopping(delta_c, delta_m,
                                effective.g2 * np.exp(-1j * phi1),
                                effective.g1 * np.exp(-1j * phi2))
    return QuadraticForm(ladder_to_quadratic(hop, pair))


def single_sphere_rotating_form(system: SingleSphere, spec: ModulationSpec,
                                truncation=DEFAULT_TRUNCATION) -> QuadraticForm:
    """Rotating-frame Hamiltonian with the full truncated sideband couplings."""
    side = _Sidebands(spec, truncation)
    delta_c = system.omega_c - spec.omega_s
    delta_m = system.omega_m - spec.omega_r
    g = system.g

    def evaluate(t):
        s = side(t)
        g1t = g * np.exp(-1j * (spec.omega_s + spec.omega_r) * t) * s
        g2t = g * np.exp(-1j * (spec.omega_s - spec.omega_r) * t) * np.conj(s)
        hop, pair = _single_hopping(delta_c, delta_m, g2t, np.conj(g1t))
        return ladder_to_quadratic(hop, pair)

    return QuadraticForm(evaluator=evaluate, n_modes=2)


def _two_matrices(diag, hop_m1, pair_m1, hop_m2, pair_m2):
    # modes ordered (c, m1, m2); hop_mj multiplies m_j^dag c, pair_mj multiplies c^dag m_j^dag
    hop = np.diag(np.asarray(diag, dtype=complex))
    hop[1, 0], hop[0, 1] = hop_m1, np.conj(hop_m1)
    hop[2, 0], hop[0, 2] = hop_m2, np.conj(hop_m2)
    pair = np.zeros((3, 3), complex)
    pair[0, 1] = pair[1, 0] = pair_m1
    pair[0, 2] = pair[2, 0] = pair_m2
    return hop, pair


def two_sphere_hamiltonian_lab(t, system: TwoSphere, spec: ModulationSpec) -> QuadraticForm:
    """Lab-frame tripartite Hamiltonian; only sphere 1 is modulated."""
    hop, pair = _two_matrices(
        (system.omega_c, system.omega_m1 + spec.magnon_shift(t), system.omega_m2),
        system.g, system.g, system.g3, system.g3)
    return QuadraticForm(ladder_to_quadratic(hop, pair))


def two_sphere_lab_form(system: TwoSphere, spec: ModulationSpec) -> QuadraticForm:
    static = two_sphere_hamiltonian_lab(0.0, system, _unmodulated(spec)).matrix.copy()

    def evaluate(t):
        m = static.copy()
        shift = spec.magnon_shift(t)
        m[2, 2] += shift
        m[3, 3] += shift
        return m

    return QuadraticForm(evaluator=evaluate, n_modes=3)


def two_sphere_hamiltonian_rwa(g1, g2, g3, omega_c=None, omega_m2=None,
                               phases=(0.0, 0.0), rtol=1e-12) -> QuadraticForm:
    """Resonant tripartite Hamiltonian
    ``(g1 e^{i phi2} m1 + g2 e^{-i phi1} m1^dag) c + g3 m2 c^dag + h.c.``

    The beam-splitter form of the second sphere requires ``omega_c ==
    omega_m2``; pass both to have that checked.
    """
    if omega_c is not None and omega_m2 is not None:
        if abs(omega_c - omega_m2) > rtol * max(abs(omega_c), abs(omega_m2)):
            raise InvalidArgumentError(
                f"RWA two-sphere form needs omega_c == omega_m2 (got {omega_c}, {omega_m2})")
    phi1, phi2 = phases
    hop, pair = _two_matrices((0.0, 0.0, 0.0), g2 * np.exp(-1j * phi1),
                              g1 * np.exp(-1j * phi2), g3, 0.0)
    return QuadraticForm(ladder_to_quadratic(hop, pair))


def two_sphere_rotating_form(system: TwoSphere, spec: ModulationSpec,
                             truncation=DEFAULT_TRUNCATION, omega_r2=None) -> QuadraticForm:
    """Rotating-frame tripartite Hamiltonian with truncated sidebands on sphere 1
    and the counter-rotating ``g3`` terms kept exactly; sphere 2 rotates at
    ``omega_r2`` (default ``omega_m2``)."""
    side = _Sidebands(spec, truncation)
    w2 = system.omega_m2 if omega_r2 is None else omega_r2
    diag = (system.omega_c - spec.omega_s, system.omega_m1 - spec.omega_r,
            system.omega_m2 - w2)
    g, g3 = system.g, system.g3

    def evaluate(t):
        s = side(t)
        g1t = g * np.exp(-1j * (spec.omega_s + spec.omega_r) * t) * s
        g2t = g * np.exp(-1j * (spec.omega_s - spec.omega_r) * t) * np.conj(s)
        hop3 = g3 * np.exp(1j * (w2 - spec.omega_s) * t)
        pair3 = g3 * np.exp(1j * (spec.omega_s + w2) * t)
        hop, pair = _two_matrices(diag, g2t, np.conj(g1t), hop3, pair3)
        return ladder_to_quadratic(hop, pair)

    return QuadraticForm(evaluator=evaluate, n_modes=3)


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotating_frame_rotation(t, spec: ModulationSpec, static_frequencies: Sequence[float] = ()):
    """Phase-space map from lab-frame to rotating-frame quadratures.

    Mode order is ``(c, m, extra...)``: the cavity turns by ``omega_s t``, the
    modulated magnon by ``omega_r t + sum_j lambda_j sin(nu_j t + phi_j)`` and
    each extra mode by ``static_frequencies[k] * t``.  Apply as ``S Sigma S^T``.
    """
    angles = [spec.omega_s * t, float(spec.magnon_phase(t))]
    angles += [w * t for w in static_frequencies]
    n = len(angles)
    S = np.zeros((2 * n, 2 * n))
    for k, theta in enumerate(angles):
        S[2 * k:2 * k + 2, 2 * k:2 * k + 2] = _rotation(theta)
    return S


def common_period(frequencies, max_denominator=10_000, atol=1e-12):
    """Smallest ``T`` with every ``f T`` a multiple of ``2 pi``, or ``None``.

    Frequencies are matched to rationals; if any is not rational to within
    ``atol`` the set is treated as incommensurate.
    """
    fracs = []
    for f in frequencies:
        if f == 0:
            continue
        fr = Fraction(abs(f)).limit_denominator(max_denominator)
        if abs(float(fr) - abs(f)) > atol:
            return None
        fracs.append(fr)
    if not fracs:
        return None
    num = reduce(math.gcd, (fr.numerator for fr in fracs))
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (fr.denominator for fr in fracs))
    return 2 * math.pi * den / num


def bogoliubov_parameters(g_small, g_large):
    """Squeezing parameter ``atanh(g_small/g_large)`` and normal-mode coupling
    ``sqrt(g_large^2 - g_small^2)``.

    Raises:
        InstabilityError: if ``|g_small| >= |g_large|``.
    """
    if not abs(g_small) < abs(g_large):
        raise InstabilityError(
            f"|{g_small:g}| >= |{g_large:g}|: parametric gain beats beam-splitter cooling")
    return math.atanh(g_small / g_large), math.sqrt(g_large**2 - g_small**2)
