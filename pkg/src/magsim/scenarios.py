"""Named experiments: configurations, runs, sweeps and analytic limits.

A :class:`ScenarioConfig` holds every physical parameter in units of the
(first) magnon frequency.  Frames:

``lab``       full modulated Hamiltonian; samples are rotated into the frame
              ``(omega_c, omega_m + phase modulation)`` before measuring.
``rotating``  rotating-frame Hamiltonian with truncated sideband sums.
``rwa``       time-independent resonant Hamiltonian.

The rotating frame always uses ``omega_s = omega_c`` and ``omega_r =
omega_m`` so both detunings vanish.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import measures
from .core_model import (
    SINGLE_SPHERE,
    TWO_SPHERE,
    BathSpec,
    diffusion_from_baths,
    drift_evaluator,
    drift_from_hamiltonian,
    thermal_occupation,
    vacuum,
)
from .dynamics import (
    IntegrationPlan,
    integrate_lyapunov,
    micromotion,
    stability_check,
    steady_state_lyapunov,
)
from .errors import ConfigError, InstabilityError, MagsimError, NotBAERegimeError
from .modulation import (
    EffectiveCouplings,
    ModulationSpec,
    SingleSphere,
    TwoSphere,
    bogoliubov_parameters,
    common_period,
    default_truncation,
    effective_couplings,
    rotating_frame_rotation,
    single_sphere_hamiltonian_rwa,
    single_sphere_lab_form,
    single_sphere_rotating_form,
    two_sphere_hamiltonian_rwa,
    two_sphere_lab_form,
    two_sphere_rotating_form,
)

SCHEMA_VERSION = 1
SYSTEMS = ("single_sphere", "two_sphere")
DEFAULT_DT = {"lab": 0.01, "rotating": 0.01, "rwa": 0.1}
OBSERVABLES = {
    "single_sphere": ("V_m", "V_c"),
    "two_sphere": ("E_m12", "E_cm1", "E_cm2", "V_c", "V_m1", "V_m2"),
}
DEFAULT_OBSERVABLES = {"single_sphere": ("V_m", "V_c"), "two_sphere": ("E_m12", "E_cm1")}


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one run.  Unknown keys are rejected on load."""

    system: str
    g: float
    kappa_c: float
    omega_c: float
    lambda1: float
    lambda2: float
    omega_m: float = 1.0
    kappa_m: Optional[float] = None
    kappa_m1: Optional[float] = None
    kappa_m2: Optional[float] = None
    omega_m2: Optional[float] = None
    g3: Optional[float] = None
    phi1: float = 0.0
    phi2: float = 0.0
    temperature: Optional[float] = None
    carrier_ghz: float = 10.0
    n_bar_c: float = 0.0
    n_bar_m: float = 0.0
    n_bar_m1: float = 0.0
    n_bar_m2: float = 0.0
    frame: str = "lab"
    t_end: Optional[float] = None
    dt: Optional[float] = None
    sample_dt: Optional[float] = None
    truncation: Optional[int] = None
    transient_only: bool = False
    observables: tuple = ()
    name: str = ""
    description: str = ""
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        obs = tuple(self.observables) or DEFAULT_OBSERVABLES.get(self.system, ())
        object.__setattr__(self, "observables", obs)
        self._validate()

    def _validate(self):
        bad = ConfigError
        if self.schema_version != SCHEMA_VERSION:
            raise bad(f"unsupported schema_version {self.schema_version}")
        if self.system not in SYSTEMS:
            raise bad(f"system must be one of {SYSTEMS}, got {self.system!r}")
        if self.frame not in DEFAULT_DT:
            raise bad(f"frame must be one of {tuple(DEFAULT_DT)}, got {self.frame!r}")
        two = self.system == "two_sphere"
        need = ("kappa_m1", "kappa_m2", "omega_m2", "g3") if two else ("kappa_m",)
        for key in need:
            if getattr(self, key) is None:
                raise bad(f"{self.system} needs {key}")
        for key in ("g", "kappa_c", "kappa_m", "kappa_m1", "kappa_m2", "g3", "lambda1",
                    "lambda2", "n_bar_c", "n_bar_m", "n_bar_m1", "n_bar_m2"):
            v = getattr(self, key)
            if v is not None and not (np.isfinite(v) and v >= 0):
                raise bad(f"{key} must be finite and >= 0, got {v}")
        for key in ("omega_c", "omega_m", "omega_m2", "carrier_ghz", "dt", "sample_dt"):
            v = getattr(self, key)
            if v is not None and not v > 0:
                raise bad(f"{key} must be positive, got {v}")
        if not self.omega_m > self.omega_c:
            raise bad("need omega_m > omega_c so that both modulation tones are positive")
        if self.temperature is not None and self.temperature < 0:
            raise bad("temperature must be >= 0")
        if self.t_end is not None and self.t_end < 0:
            raise bad("t_end must be >= 0")
        if self.truncation is not None and self.truncation < 1:
            raise bad("truncation must be >= 1")
        allowed = OBSERVABLES[self.system]
        for o in self.observables:
            if o not in allowed:
                raise bad(f"observable {o!r} not available for {self.system}; choose from {allowed}")

    # construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, data, source="<dict>"):
        if not isinstance(data, dict):
            raise ConfigError(f"{source}: top level must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"{source}: unknown keys {unknown}")
        if "schema_version" not in data:
            raise ConfigError(f"{source}: missing required key 'schema_version'")
        data = dict(data)
        if "observables" in data:
            data["observables"] = tuple(data["observables"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"{source}: {exc}") from None

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["observables"] = list(self.observables)
        return d

    def with_value(self, key, value):
        """Copy with one field changed; ``n_bar`` sets every mode occupation."""
        if key == "n_bar":
            return dataclasses.replace(self, temperature=None, n_bar_c=value, n_bar_m=value,
                                       n_bar_m1=value, n_bar_m2=value)
        if key not in {f.name for f in dataclasses.fields(self)}:
            raise ConfigError(f"unknown sweep axis {key!r}")
        return dataclasses.replace(self, **{key: value})

    # derived quantities ---------------------------------------------------

    @property
    def two_sphere(self) -> bool:
        return self.system == "two_sphere"

    @property
    def layout(self):
        return TWO_SPHERE if self.two_sphere else SINGLE_SPHERE

    @property
    def modulation(self) -> ModulationSpec:
        return ModulationSpec.resonant(self.lambda1, self.lambda2, self.omega_c, self.omega_m,
                                       self.phi1, self.phi2)

    @property
    def kappas(self):
        if self.two_sphere:
            return (self.kappa_c, self.kappa_m1, self.kappa_m2)
        return (self.kappa_c, self.kappa_m)

    def n_bars(self):
        """Per-mode occupations; a temperature converts with absolute frequencies
        ``omega * 2 pi * carrier_ghz``."""
        if self.temperature is None:
            if self.two_sphere:
                return (self.n_bar_c, self.n_bar_m1, self.n_bar_m2)
            return (self.n_bar_c, self.n_bar_m)
        scale = 2 * math.pi * self.carrier_ghz * 1e9
        freqs = [self.omega_c, self.omega_m] + ([self.omega_m2] if self.two_sphere else [])
        return tuple(thermal_occupation(w * scale, self.temperature) for w in freqs)

    @property
    def baths(self) -> BathSpec:
        return BathSpec(self.kappas, self.n_bars())

    @property
    def effective(self):
        return effective_couplings(self.g, self.lambda1, self.lambda2, self.g3)

    @property
    def resolved_truncation(self) -> int:
        return self.truncation or default_truncation((self.lambda1, self.lambda2))

    @property
    def resolved_t_end(self) -> float:
        if self.t_end is not None:
            return self.t_end
        km = min(self.kappas[1:])
        if km <= 0:
            raise ConfigError("t_end is required when magnon damping is zero")
        return 8.0 / km

    def resolved_dt(self, frame=None) -> float:
        return self.dt or DEFAULT_DT[frame or self.frame]

    @property
    def resolved_sample_dt(self) -> float:
        return self.sample_dt or max(self.resolved_t_end / 1000.0, 1e-300)

    def frame_frequencies(self):
        """Static rotation rates of the extra (unmodulated) modes."""
        return (self.omega_m2,) if self.two_sphere else ()

    def period(self):
        spec = self.modulation
        return common_period((spec.nu1, spec.nu2, spec.omega_s, spec.omega_r)
                             + self.frame_frequencies())

    def hamiltonian(self, frame=None):
        frame = frame or self.frame
        spec = self.modulation
        if self.two_sphere:
            system = TwoSphere(self.omega_c, self.omega_m, self.omega_m2, self.g, self.g3)
            if frame == "lab":
                return two_sphere_lab_form(system, spec)
            if frame == "rotating":
                return two_sphere_rotating_form(system, spec, self.resolved_truncation)
            eff = self.effective
            return two_sphere_hamiltonian_rwa(eff.g1, eff.g2, self.g3, self.omega_c,
                                              self.omega_m2, (self.phi1, self.phi2))
        system = SingleSphere(self.omega_c, self.omega_m, self.g)
        if frame == "lab":
            return single_sphere_lab_form(system, spec)
        if frame == "rotating":
            return single_sphere_rotating_form(system, spec, self.resolved_truncation)
        return single_sphere_hamiltonian_rwa(self.effective, (0.0, 0.0), (self.phi1, self.phi2))

    def plan(self, frame=None) -> IntegrationPlan:
        frame = frame or self.frame
        dt = self.resolved_dt(frame)
        stride = max(1, int(round(self.resolved_sample_dt / dt)))
        period = None
        if frame != "rwa":
            period = self.period()
        spec = self.modulation
        return IntegrationPlan(self.resolved_t_end, dt, stride, frame, period,
                               max(spec.nu1, spec.nu2, self.omega_m))


def load_config(path) -> ScenarioConfig:
    """Read a JSON scenario; parse errors carry the line and column."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from None
    return ScenarioConfig.from_dict(data, source=str(path))


def presets_dir() -> Path:
    return Path(str(resources.files("magsim") / "presets"))


def list_presets():
    return sorted(p.stem for p in presets_dir().glob("*.json"))


def load_preset(name) -> ScenarioConfig:
    path = presets_dir() / (name if name.endswith(".json") else name + ".json")
    if not path.exists():
        raise ConfigError(f"no preset named {name!r}; available: {list_presets()}")
    return load_config(path)


# observables ----------------------------------------------------------------

_PAIRS = {"E_m12": ("m1", "m2"), "E_cm1": ("c", "m1"), "E_cm2": ("c", "m2")}


def observe(state, names):
    out = {}
    for name in names:
        if name.startswith("V_"):
            out[name] = measures.optimal_squeezing(measures.reduce(state, [name[2:]]))
        else:
            out[name] = measures.log_negativity(measures.reduce(state, _PAIRS[name]))
    return out


@dataclass
class ScenarioResult:
    """Sampled observables, their steady values and run metadata."""

    name: str
    frame: str
    times: np.ndarray
    series: dict
    steady: dict
    metadata: dict = field(default_factory=dict)
    trajectory: object = field(default=None, repr=False)


def _series(traj, config, frame):
    names = config.observables
    series = {n: np.empty(len(traj)) for n in names}
    spec = config.modulation
    extra = config.frame_frequencies()
    for k, state in enumerate(traj):
        if frame == "lab":
            S = rotating_frame_rotation(state.t, spec, extra)
            state = dataclasses.replace(state, sigma=S @ state.sigma @ S.T)
        for n, v in observe(state, names).items():
            series[n][k] = v
    return series


def run_scenario(config: ScenarioConfig, frame=None) -> ScenarioResult:
    """Integrate one configuration from the joint vacuum and measure it.

    For the RWA frame ``steady`` holds the algebraic steady state.  For the
    time-dependent frames it holds the average over the modulation period
    following ``t_end``; ``metadata['steady_range']`` keeps the min and max.
    """
    frame = frame or config.frame
    baths = config.baths
    H = config.hamiltonian(frame)
    D = diffusion_from_baths(baths)
    plan = config.plan(frame)
    drift = drift_evaluator(H, baths)
    if frame == "rwa" and not config.transient_only:
        verdict = stability_check(drift)
        if not verdict:
            raise InstabilityError(
                f"{config.name or 'scenario'}: RWA drift unstable "
                f"(max Re lambda = {verdict.max_real_part:.3e})", verdict.max_real_part)
    traj = integrate_lyapunov(drift, D, vacuum(config.layout), plan)
    series = _series(traj, config, frame)
    meta = {
        "frame": frame,
        "dt": traj.dt,
        "sample_stride": traj.sample_stride,
        "t_end": float(traj.times[-1]),
        "truncation": config.resolved_truncation if frame == "rotating" else None,
        "period": plan.period,
        "n_bar": list(baths.n_bar),
        "initial_state": "vacuum",
    }
    if config.temperature is not None:
        meta["carrier_ghz"] = config.carrier_ghz
        meta["temperature_note"] = (
            f"n_bar from T={config.temperature} K with omega_m/2pi = {config.carrier_ghz} GHz "
            "(assumed carrier)")
    steady = {}
    if frame == "rwa":
        if not config.transient_only:
            ss = steady_state_lyapunov(drift, D, config.layout)
            steady = observe(ss, config.observables)
        else:
            steady = {n: float(v[-1]) for n, v in series.items()}
    else:
        mm = micromotion(traj)
        mm_series = _series(mm, config, frame)
        steady = {n: float(np.mean(v)) for n, v in mm_series.items()}
        meta["steady_range"] = {n: [float(v.min()), float(v.max())] for n, v in mm_series.items()}
    meta["final_sample"] = {n: float(v[-1]) for n, v in series.items()}
    return ScenarioResult(config.name, frame, traj.times, series, steady, meta, traj)


def steady_observables(config: ScenarioConfig, frame=None) -> dict:
    """Steady observables: an algebraic solve for RWA, a long run otherwise."""
    frame = frame or config.frame
    if frame == "rwa":
        baths = config.baths
        A = drift_from_hamiltonian(config.hamiltonian("rwa"), baths)
        ss = steady_state_lyapunov(A, diffusion_from_baths(baths), config.layout)
        return observe(ss, config.observables)
    return run_scenario(config, frame).steady


def validate_rwa(config: ScenarioConfig) -> dict:
    """Largest ``|lab - rwa|`` per observable over a shared sample grid."""
    lab = run_scenario(config, "lab")
    spacing = float(lab.times[1] - lab.times[0]) if len(lab.times) > 1 else config.resolved_t_end
    n_sub = max(1, math.ceil(spacing / DEFAULT_DT["rwa"] - 1e-9))
    rwa_cfg = dataclasses.replace(config, dt=spacing / n_sub, sample_dt=spacing,
                                  t_end=float(lab.times[-1]), frame="rwa")
    rwa = run_scenario(rwa_cfg, "rwa")
    n = min(len(lab.times), len(rwa.times))
    if not np.allclose(lab.times[:n], rwa.times[:n], rtol=1e-9, atol=1e-6):
        raise MagsimError("lab and RWA sample grids do not line up")
    report = {
        "max_gap": {o: float(np.max(np.abs(lab.series[o][:n] - rwa.series[o][:n])))
                    for o in config.observables},
        "steady_gap": {o: abs(lab.steady[o] - rwa.steady[o]) for o in config.observables},
        "lab_steady": lab.steady,
        "rwa_steady": rwa.steady,
        "times": lab.times[:n],
        "lab": {o: lab.series[o][:n] for o in config.observables},
        "rwa": {o: rwa.series[o][:n] for o in config.observables},
    }
    return report


# analytic limits --------------------------------------------------------------


def analytic_squeezed_vacuum(r) -> np.ndarray:
    """Covariance of the single-mode squeezed vacuum, ``diag(e^{-2r}, e^{2r})/2``."""
    return 0.5 * np.diag([math.exp(-2 * r), math.exp(2 * r)])


def two_mode_squeezer(r) -> np.ndarray:
    ch, sh = math.cosh(r), math.sinh(r)
    Z = np.diag([1.0, -1.0])
    return np.block([[ch * np.eye(2), sh * Z], [sh * Z, ch * np.eye(2)]])


def analytic_two_mode_squeezed_thermal(r2) -> np.ndarray:
    """Two-mode squeezing applied to vacuum times a thermal mode of occupation ``sinh^2 r2``."""
    alpha, beta = 0.5, math.sinh(r2) ** 2 + 0.5
    S = two_mode_squeezer(r2)
    return S @ np.diag([alpha, alpha, beta, beta]) @ S.T


def bogoliubov_prediction(config: ScenarioConfig) -> dict:
    """Steady observables in the limit of vanishing magnon damping."""
    eff = config.effective
    if config.two_sphere:
        r2, omega2 = bogoliubov_parameters(eff.g1, config.g3)
        sigma = analytic_two_mode_squeezed_thermal(r2)
        return {"r": r2, "Omega": omega2, "E_m12": measures.log_negativity(sigma)}
    r, omega1 = bogoliubov_parameters(eff.g1, eff.g2)
    return {"r": r, "Omega": omega1,
            "V_m": measures.optimal_squeezing(analytic_squeezed_vacuum(r))}


# backaction evasion -------------------------------------------------------------


@dataclass
class BAEReport:
    G: float
    times: np.ndarray
    var_xm: np.ndarray
    var_pm: np.ndarray
    var_xc: np.ndarray
    structure_ok: bool
    xm_deviation: float
    pm_growth: float

    def summary(self):
        return {
            "G": self.G,
            "structure_ok": self.structure_ok,
            "max_abs_var_xm_change": self.xm_deviation,
            "early_var_pm_growth_coefficient": self.pm_growth,
            "var_pm_final": float(self.var_pm[-1]),
            "t_end": float(self.times[-1]),
        }


def bae_demo(G, kappa_c, n_bar_c=0.0, t_end=1e3, dt=0.1, kappa_m=0.0, n_bar_m=0.0,
             deltas=(0.0, 0.0), phases=(0.0, 0.0), early_time=None) -> BAEReport:
    """Integrate the ``G (m + m^dag)(c + c^dag)`` coupling from vacuum.

    ``pm_growth`` is the least-squares coefficient ``a`` of
    ``Var(P_m) - 1/2 = a t^2`` over ``t <= early_time`` (default
    ``min(0.05/kappa_c, t_end)``).

    Raises:
        NotBAERegimeError: nonzero detuning or phase.
    """
    if any(d != 0 for d in deltas) or any(p != 0 for p in phases):
        raise NotBAERegimeError("backaction evasion needs zero detunings and zero phase")
    H = single_sphere_hamiltonian_rwa(EffectiveCouplings(G, G))
    baths = BathSpec((kappa_c, kappa_m), (n_bar_c, n_bar_m))
    A = drift_from_hamiltonian(H, baths)
    # X_c (row 0) and X_m (row 2) must not see the other mode
    structure_ok = bool(np.all(A[0, 2:] == 0) and np.all(A[2, :2] == 0))
    D = diffusion_from_baths(baths)
    plan = IntegrationPlan(t_end, dt, 1, "rwa")
    traj = integrate_lyapunov(A, D, vacuum(SINGLE_SPHERE), plan)
    s = traj.sigmas
    var_xm, var_pm, var_xc = s[:, 2, 2], s[:, 3, 3], s[:, 0, 0]
    if early_time is None:
        early_time = min(0.05 / kappa_c, t_end) if kappa_c > 0 else t_end
    mask = (traj.times > 0) & (traj.times <= early_time)
    t2 = traj.times[mask] ** 2
    growth = float(np.dot(t2, var_pm[mask] - var_pm[0]) / np.dot(t2, t2)) if mask.any() else 0.0
    return BAEReport(G, traj.times, var_xm, var_pm, var_xc, structure_ok,
                     float(np.max(np.abs(var_xm - var_xm[0]))), growth)


# sweeps ------------------------------------------------------------------------


@dataclass
class SweepRow:
    value: float
    steady: dict
    error: Optional[str] = None


def _sweep_point(args):
    config, axis, value, frame = args
    try:
        return SweepRow(value, steady_observables(config.with_value(axis, value), frame))
    except MagsimError as exc:
        return SweepRow(value, {}, f"{type(exc).__name__}: {exc}")


def default_jobs():
    try:
        return max(1, int(os.environ.get("MAGSIM_JOBS", "1")))
    except ValueError:
        return 1


def sweep(config: ScenarioConfig, axis, values, frame=None, jobs=None):
    """Steady observables for each value of one configuration field.

    Failures are recorded per row and the sweep continues.
    """
    jobs = default_jobs() if jobs is None else jobs
    config.with_value(axis, values[0] if len(values) else 0.0)
    tasks = [(config, axis, float(v), frame) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]


def is_monotonic(seq, increasing=True, strict=True):
    d = np.diff(np.asarray(seq, dtype=float))
    if increasing:
        return bool(np.all(d > 0) if strict else np.all(d >= 0))
    return bool(np.all(d < 0) if strict else np.all(d <= 0))
