"""Gaussian covariance simulation of two-tone modulated cavity electromagnonics."""

from .core_model import (
    BathSpec,
    CovarianceState,
    ModeLayout,
    QuadraticForm,
    diffusion_from_baths,
    drift_from_hamiltonian,
    symplectic_form,
    thermal_occupation,
    vacuum,
)
from .dynamics import IntegrationPlan, integrate_lyapunov, stability_check, steady_state_lyapunov
from .measures import log_negativity, optimal_squeezing, reduce, symplectic_eigenvalues
from .modulation import (
    EffectiveCouplings,
    ModulationSpec,
    bessel_j,
    bogoliubov_parameters,
    effective_couplings,
    rotating_frame_rotation,
)
from .scenarios import (
    ScenarioConfig,
    bae_demo,
    load_config,
    load_preset,
    run_scenario,
    steady_observables,
    sweep,
    validate_rwa,
)

__version__ = "0.1.0"
