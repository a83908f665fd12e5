"""Covariance dynamics ``dSigma/dt = A Sigma + Sigma A^T + D``.

The integrator is classical fourth-order Runge-Kutta with a fixed step.  The
equation is linear in ``Sigma``, so one RK4 step is an affine map on
``vec(Sigma)``; it is assembled once as a matrix acting on
``[vec(Sigma); 1]``.  That gives three execution paths producing the same
RK4 trajectory up to rounding:

* constant drift: the stride map is a matrix power of the one-step map;
* periodic drift: the step maps of one period are composed into a small set
  of phase-segment maps, reused for every later period;
* anything else: a plain step-by-step loop.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .core_model import (
    CovarianceState,
    ModeLayout,
    default_layout,
    uncertainty_margin,
    validate_covariance,
)
from .errors import (
    DegenerateSystemError,
    IntegrationDivergedError,
    InvalidArgumentError,
    NoSteadyStateError,
)

FRAMES = ("lab", "rotating", "rwa")
DIVERGENCE_TOL = 1e-6
ASYMMETRY_WARN = 1e-9
STABILITY_MARGIN = 1e-12
PERIOD_SEGMENTS = 100

Drift = Union[np.ndarray, Callable[[float], np.ndarray]]


@dataclass(frozen=True)
class IntegrationPlan:
    """Fixed-step grid.

    ``sample_stride`` counts steps of size ``dt`` between emitted samples.
    ``period`` marks the drift as periodic and enables the period-map path;
    the step is then shrunk so that a period holds a whole number of steps
    (a multiple of 100) and samples snap to multiples of a hundredth of it.
    ``max_frequency`` is the fastest drive frequency, used to vet ``dt`` in
    the lab frame.
    """

    t_end: float
    dt: float
    sample_stride: int = 1
    frame: str = "rwa"
    period: Optional[float] = None
    max_frequency: Optional[float] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgumentError("dt must be positive")
        if not self.t_end >= 0:
            raise InvalidArgumentError("t_end must be >= 0")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise InvalidArgumentError("sample_stride must be a positive integer")
        if self.frame not in FRAMES:
            raise InvalidArgumentError(f"frame must be one of {FRAMES}")
        if self.period is not None and not self.period > 0:
            raise InvalidArgumentError("period must be positive")
        if self.frame == "lab" and self.max_frequency:
            limit = 2 * math.pi / self.max_frequency / 20
            if self.dt > limit:
                raise InvalidArgumentError(
                    f"dt={self.dt} does not resolve the fastest tone (need dt <= {limit:.4g})")


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    max_real_part: float

    def __bool__(self):
        return self.stable


def stability_check(A) -> StabilityVerdict:
    """Hurwitz test: stable iff every eigenvalue has real part below ``-1e-12``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError("drift must be square")
    mrp = float(np.linalg.eigvals(A).real.max())
    return StabilityVerdict(mrp < -STABILITY_MARGIN, mrp)


def _lyapunov_operator(A):
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(A, eye) + np.kron(eye, A)


def steady_state_lyapunov(A, D, layout: Optional[ModeLayout] = None) -> CovarianceState:
    """Solve ``A Sigma + Sigma A^T + D = 0`` by dense Kronecker vectorization.

    Raises:
        NoSteadyStateError: ``A`` is not Hurwitz stable.
        DegenerateSystemError: the vectorized system is singular.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    verdict = stability_check(A)
    if not verdict:
        raise NoSteadyStateError(
            f"drift is unstable (max Re lambda = {verdict.max_real_part:.3e})",
            verdict.max_real_part)
    n = A.shape[0]
    L = _lyapunov_operator(A)
    try:
        x = np.linalg.solve(L, -D.ravel())
    except np.linalg.LinAlgError as exc:
        raise DegenerateSystemError(str(exc)) from exc
    # one round of refinement keeps the residual at rounding level
    x += np.linalg.solve(L, -D.ravel() - L @ x)
    sigma = x.reshape(n, n)
    sigma = 0.5 * (sigma + sigma.T)
    residual = np.linalg.norm(A @ sigma + sigma @ A.T + D)
    if residual > 1e-10 * max(np.linalg.norm(D), 1e-300):
        raise DegenerateSystemError(f"steady-state residual {residual:.3e} too large")
    return CovarianceState(sigma, math.inf, layout)


def _generator(A, dvec):
    """Augmented generator acting on ``[vec(Sigma); 1]``."""
    n2 = dvec.size
    G = np.zeros((n2 + 1, n2 + 1))
    G[:n2, :n2] = _lyapunov_operator(A)
    G[:n2, n2] = dvec
    return G


def _rk4_map(G0, Gm, G1, h):
    eye = np.eye(G0.shape[0])
    k1 = G0
    k2 = Gm @ (eye + 0.5 * h * k1)
    k3 = Gm @ (eye + 0.5 * h * k2)
    k4 = G1 @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class PeriodicPropagator:
    """RK4 propagation of a drift with period ``period``.

    One period is split into ``segments`` equal phase segments of
    ``steps_per_period / segments`` steps each; every segment's composite map
    is stored, so a full period costs ``segments`` small mat-vecs instead of
    thousands of RK4 stages.
    """

    def __init__(self, drift, D, period, dt, segments=PERIOD_SEGMENTS):
        self.period = float(period)
        self.segments = int(segments)
        self.n_per = self.segments * max(1, math.ceil(self.period / dt / self.segments - 1e-9))
        self.h = self.period / self.n_per
        self.seg_steps = self.n_per // self.segments
        dvec = np.asarray(D, dtype=float).ravel()
        h = self.h
        maps = []
        G_next = _generator(np.asarray(drift(0.0)), dvec)
        for seg in range(self.segments):
            W = np.eye(dvec.size + 1)
            for k in range(seg * self.seg_steps, (seg + 1) * self.seg_steps):
                t = k * h
                G0 = G_next
                Gm = _generator(np.asarray(drift(t + 0.5 * h)), dvec)
                G_next = _generator(np.asarray(drift(t + h)), dvec)
                W = _rk4_map(G0, Gm, G_next, h) @ W
            maps.append(W)
        self.segment_maps = maps
        P = np.eye(dvec.size + 1)
        for W in maps:
            P = W @ P
        self.period_map = P

    def advance(self, z, start_segment, n_segments):
        """Apply ``n_segments`` consecutive segment maps starting at a phase index."""
        full, rest = divmod(n_segments, self.segments)
        if start_segment == 0 and full:
            z = np.linalg.matrix_power(self.period_map, full) @ z
        elif full:
            shifted = np.eye(z.size)
            for k in range(self.segments):
                shifted = self.segment_maps[(start_segment + k) % self.segments] @ shifted
            z = np.linalg.matrix_power(shifted, full) @ z
        for k in range(rest):
            z = self.segment_maps[(start_segment + k) % self.segments] @ z
        return z

    def fixed_point(self):
        """``vec(Sigma)`` at phase zero of the periodic (Floquet) steady state."""
        n2 = self.period_map.shape[0] - 1
        Pm = self.period_map[:n2, :n2]
        q = self.period_map[:n2, n2]
        if np.max(np.abs(np.linalg.eigvals(Pm))) >= 1.0:
            raise NoSteadyStateError("period map is not contracting; no periodic steady state")
        return np.linalg.solve(np.eye(n2) - Pm, q)


@dataclass
class Trajectory:
    """Sampled covariance trajectory; indexes as a sequence of :class:`CovarianceState`."""

    times: np.ndarray
    sigmas: np.ndarray
    layout: ModeLayout
    dt: float
    sample_stride: int
    propagator: Optional[PeriodicPropagator] = field(default=None, repr=False)
    final_segment: int = 0

    def __len__(self):
        return len(self.times)

    def __getitem__(self, k):
        return CovarianceState(self.sigmas[k], self.times[k], self.layout, check=False)

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def final(self) -> CovarianceState:
        return self[-1]


def _vet(sigma, t):
    asym = np.max(np.abs(sigma - sigma.T))
    if asym > ASYMMETRY_WARN * max(1.0, np.max(np.abs(sigma))):
        warnings.warn(f"covariance asymmetry {asym:.2e} at t={t:g} before symmetrization")
    sigma = 0.5 * (sigma + sigma.T)
    if not np.all(np.isfinite(sigma)):
        raise IntegrationDivergedError(f"non-finite covariance at t={t:g}")
    margin = uncertainty_margin(sigma)
    scale = max(1.0, float(np.max(np.abs(sigma))))
    if margin < -DIVERGENCE_TOL * scale:
        raise IntegrationDivergedError(
            f"uncertainty relation violated by {-margin:.3e} at t={t:g}")
    return sigma


def integrate_lyapunov(drift: Drift, D, sigma0: CovarianceState, plan: IntegrationPlan) -> Trajectory:
    """Fixed-step RK4 trajectory of the covariance, sampled every ``sample_stride`` steps.

    ``drift`` is a constant array or a callable ``A(t)``.  Samples are
    symmetrised and checked against the uncertainty relation; a violation
    beyond 1e-6 raises :class:`IntegrationDivergedError`.
    """
    D = np.asarray(D, dtype=float)
    sigma = np.array(sigma0.sigma, dtype=float)
    n = sigma.shape[0]
    if D.shape != (n, n):
        raise InvalidArgumentError("diffusion and covariance dimensions differ")
    layout = sigma0.layout or default_layout(n // 2)
    validate_covariance(sigma, tol=DIVERGENCE_TOL)
    if callable(drift):
        if plan.period is not None:
            return _integrate_periodic(drift, D, sigma, sigma0.t, plan, layout)
        return _integrate_direct(drift, D, sigma, sigma0.t, plan, layout)
    A = np.asarray(drift, dtype=float)
    if A.shape != (n, n):
        raise InvalidArgumentError("drift and covariance dimensions differ")
    return _integrate_constant(A, D, sigma, sigma0.t, plan, layout)


def _collect(times, zs, n, layout, dt, stride, **extra):
    sig = np.empty((len(zs), n, n))
    for k, (t, z) in enumerate(zip(times, zs)):
        sig[k] = _vet(z[: n * n].reshape(n, n), t)
    return Trajectory(np.asarray(times), sig, layout, dt, stride, **extra)


def _integrate_constant(A, D, sigma, t0, plan, layout):
    n = A.shape[0]
    h = plan.dt
    n_steps = int(round(plan.t_end / h))
    stride = int(plan.sample_stride)
    G = _generator(A, D.ravel())
    step = _rk4_map(G, G, G, h)
    W = np.linalg.matrix_power(step, stride)
    z = np.append(sigma.ravel(), 1.0)
    times, zs = [t0], [z]
    k = 0
    while k + stride <= n_steps:
        z = W @ z
        z[: n * n] = 0.5 * (z[: n * n] + z[: n * n].reshape(n, n).T.ravel())
        k += stride
        times.append(t0 + k * h)
        zs.append(z)
    if k < n_steps:
        z = np.linalg.matrix_power(step, n_steps - k) @ z
        times.append(t0 + n_steps * h)
        zs.append(z)
    return _collect(times, zs, n, layout, h, stride)


def _integrate_periodic(drift, D, sigma, t0, plan, layout):
    n = sigma.shape[0]
    prop = PeriodicPropagator(drift, D, plan.period, plan.dt)
    h = prop.h
    seg_len = prop.seg_steps
    # stride snaps to whole phase segments; time origin must sit on a segment edge
    want = max(1, int(round(plan.sample_stride * plan.dt / h)))
    stride_segs = max(1, int(round(want / seg_len)))
    start = t0 / (seg_len * h)
    start_seg = int(round(start))
    if abs(start - start_seg) > 1e-9 * max(1.0, abs(start)):
        raise InvalidArgumentError("periodic integration must start on a phase-segment boundary")
    start_seg %= prop.segments
    n_samples = int(round(plan.t_end / (stride_segs * seg_len * h)))
    z = np.append(sigma.ravel(), 1.0)
    times, zs = [t0], [z]
    seg = start_seg
    for k in range(1, n_samples + 1):
        z = prop.advance(z, seg, stride_segs)
        seg = (seg + stride_segs) % prop.segments
        z[: n * n] = 0.5 * (z[: n * n] + z[: n * n].reshape(n, n).T.ravel())
        times.append(t0 + k * stride_segs * seg_len * h)
        zs.append(z)
    return _collect(times, zs, n, layout, h, stride_segs * seg_len,
                    propagator=prop, final_segment=seg)


def _integrate_direct(drift, D, sigma, t0, plan, layout):
    h = plan.dt
    n_steps = int(round(plan.t_end / h))
    stride = int(plan.sample_stride)

    def rhs(t, s):
        A = drift(t)
        As = A @ s
        return As + As.T + D

    times, sig = [t0], [sigma.copy()]
    t = t0
    for k in range(1, n_steps + 1):
        k1 = rhs(t, sigma)
        k2 = rhs(t + 0.5 * h, sigma + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, sigma + 0.5 * h * k2)
        k4 = rhs(t + h, sigma + h * k3)
        sigma = sigma + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        sigma = 0.5 * (sigma + sigma.T)
        t = t0 + k * h
        if k % stride == 0 or k == n_steps:
            times.append(t)
            sig.append(sigma)
    n = sigma.shape[0]
    zs = [np.append(s.ravel(), 1.0) for s in sig]
    return _collect(times, zs, n, layout, h, stride)


def micromotion(traj: Trajectory):
    """States at every phase segment of the period that follows the last sample.

    Only available for trajectories integrated on the periodic path.
    """
    prop = traj.propagator
    if prop is None:
        raise InvalidArgumentError("trajectory was not integrated with a periodic drift")
    n = traj.sigmas.shape[1]
    z = np.append(traj.sigmas[-1].ravel(), 1.0)
    seg = traj.final_segment
    t = traj.times[-1]
    times, zs = [], []
    for k in range(prop.segments):
        z = prop.segment_maps[seg] @ z
        seg = (seg + 1) % prop.segments
        times.append(t + (k + 1) * prop.seg_steps * prop.h)
        zs.append(z)
    return _collect(times, zs, n, traj.layout, prop.h, prop.seg_steps)


def floquet_steady_state(drift, D, period, dt, layout=None) -> CovarianceState:
    """Periodic steady state at phase zero from the one-period RK4 map."""
    prop = PeriodicPropagator(drift, D, period, dt)
    x = prop.fixed_point()
    n = int(round(math.sqrt(x.size)))
    s = x.reshape(n, n)
    return CovarianceState(0.5 * (s + s.T), 0.0, layout)
