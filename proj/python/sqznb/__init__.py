"""Squeezed-light quantum noise budgets for interferometric detectors."""

from ._core import (
    AnglePolicy,
    FitResult,
    Improvement,
    InfeasibleError,
    InterferometerConfig,
    LossChain,
    NoOptimumError,
    NoiseBudget,
    OptimalInjection,
    ParseError,
    PhaseNoise,
    SqueezedState,
    SqueezerSetup,
    UncertaintyResult,
    apply_loss,
    apply_phase_noise,
    compose,
    coupling_kappa,
    detected_db,
    equivalent_power_increase,
    fit_efficiency,
    improvement_db,
    ingest_asd,
    make_grid,
    mc_uncertainty,
    optimal_inject_db,
    propagate,
    quantum_noise_asd,
    quantum_noise_curve,
    resample,
    sql_asd,
    state_from_db,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
