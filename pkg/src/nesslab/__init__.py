"""Numerical laboratory for the steady state of a driven chain with a one-site field.

Closed-form steady-state correlations, heat flux, entropy production, and
the log-divergence of the flux derivative at zero field, all checked
against a dense finite-lattice evolution oracle.
"""

from .exceptions import (
    ConsistencyError,
    DomainError,
    IllConditioned,
    InvalidInterval,
    NoBoundState,
    NonConvergence,
    ResourceLimit,
    TimeHorizonExceeded,
    UndefinedAtOrigin,
    WindowTooLarge,
)
from .model import (
    BoundState,
    ModelParams,
    OperatorKind,
    ThermalConfig,
    bound_state,
    dispersion,
    operator_stencil,
    planck_density,
    planck_difference,
)
from .ness import (
    CorrelationBlock,
    correlation_block,
    s_element,
    ti_commutator_element,
    ti_commutator_direct,
)
from .numerics import (
    QuadratureResult,
    QuadratureSpec,
    adaptive_integrate,
    geometric_sine_sum,
    with_breakpoints,
)
from .oracle import (
    EvolutionTrace,
    TruncatedSystem,
    build_truncation,
    evolve_correlation,
    evolve_with_state,
    initial_two_point,
    ness_estimate,
    numeric_wave_action,
    oracle_flux,
)
from .scattering import (
    ac_overlap,
    magnetic_correction,
    pp_weight,
    wave_action,
    xy_symbol,
)
from .transport import (
    DivergenceFit,
    FluxReport,
    LogDecomposition,
    divergence_fit,
    entropy_production,
    flux_derivative,
    flux_report,
    flux_second_derivative,
    heat_flux,
    log_coefficient,
    log_decomposition,
    remainder_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "ConsistencyError",
    "CorrelationBlock",
    "DivergenceFit",
    "DomainError",
    "EvolutionTrace",
    "FluxReport",
    "IllConditioned",
    "InvalidInterval",
    "LogDecomposition",
    "ModelParams",
    "NoBoundState",
    "NonConvergence",
    "OperatorKind",
    "QuadratureResult",
    "QuadratureSpec",
    "ResourceLimit",
    "ThermalConfig",
    "TimeHorizonExceeded",
    "TruncatedSystem",
    "UndefinedAtOrigin",
    "WindowTooLarge",
    "ac_overlap",
    "adaptive_integrate",
    "bound_state",
    "build_truncation",
    "correlation_block",
    "dispersion",
    "divergence_fit",
    "entropy_production",
    "evolve_correlation",
    "evolve_with_state",
    "flux_derivative",
    "flux_report",
    "flux_second_derivative",
    "geometric_sine_sum",
    "heat_flux",
    "initial_two_point",
    "log_coefficient",
    "log_decomposition",
    "magnetic_correction",
    "ness_estimate",
    "numeric_wave_action",
    "operator_stencil",
    "oracle_flux",
    "planck_density",
    "planck_difference",
    "pp_weight",
    "remainder_bound",
    "s_element",
    "ti_commutator_element",
    "ti_commutator_direct",
    "wave_action",
    "with_breakpoints",
    "xy_symbol",
]
