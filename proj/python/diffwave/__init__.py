"""Diffusion waves of the damped p-system."""

from ._core import (
    ArgumentError,
    BlowUpError,
    ConfigError,
    DiagnosticsSeries,
    DomainError,
    Error,
    FitError,
    IoError,
    ModelClosure,
    ProfileOptions,
    RateFit,
    RunConfig,
    ScenarioSpec,
    SolverError,
    WaveProfile,
    fit_decay_rate,
    load_config,
    parse_config,
    preset_config,
    serialize_config,
    simulate,
    solve_profile,
    verify,
)

__version__ = "0.1.0"
