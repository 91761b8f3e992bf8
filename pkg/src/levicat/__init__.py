"""Decoherence budgets and collapse-model inference for levitated cat states.

The package covers the full pipeline for a levitated-nanosphere
superposition experiment: experimental parameters and derived scales,
environmental and collapse decoherence rates, cat-state preparation through
a conditional displacement gate, open-system evolution in the Fock and
position bases, Wigner-function diagnostics, synthetic-data generation, and
Bayesian recovery or exclusion of collapse parameters.

The Metropolis-Hastings core ships both as a compiled extension and as a
pure-Python mirror; ``kernel_backend()`` reports which one is active, and
both produce bit-identical chains for the same seed.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as _KERNEL_BACKEND
from .config import Config, InferenceConfig, OutputConfig, demo_config, load_config
from .constants import AMU, G_NEWTON, HBAR, K_B
from .dynamics import (CoherenceCurve, RateDataset, coherence_dynamic,
                       coherence_static, default_separation_grid,
                       generate_synthetic_dataset)
from .errors import (ConfigurationError, ConvergenceError, LambDickeWarning,
                     LevicatError, MassOverrideWarning, NumericalError,
                     TruncationError)
from .inference import (PosteriorResult, PriorSpec, RateGeometry, gelman_rubin,
                        hpd_interval, log_posterior, narrowing_study, run_mcmc,
                        self_consistent_dpp, upper_bound)
from .lindblad import (EvolutionResult, apply_localization_kernel,
                       dpp_for_localization_rate, evolve_lindblad,
                       localization_rate)
from .operators import (ConditionalDisplacementGate, cat_from_gate,
                        cat_norm_factor, cat_separation, coherent_state,
                        conditional_displacement_gate, displacement,
                        prepare_cat)
from .params import (CollapseParams, DerivedScales, GasSpec, ParticleSpec,
                     TrapSpec, derive_scales, effective_mass, geometric_mass)
from .rates import (DiffusionBudget, RatePoint, calibrate_dpp_from_heating,
                    csl_form_factor, cycle_averaged_gamma, d_pp_gas, d_pp_trap,
                    diffusion_budget, gamma_csl, gamma_csl_max,
                    gamma_csl_small_sep, gamma_dp, gamma_env, gamma_total,
                    heating_from_dpp, rate_table)
from .scan import (ExclusionMap, MassScanRow, critical_lambda, scan_exclusion,
                   scan_mass, scan_rates_vs_separation)
from .states import (DensityMatrix, FockState, PositionGrid,
                     ThermalizationSpec, coherence_between,
                     default_position_grid, fock_to_position)
from .wigner import WignerGrid, purity_from_wigner, wigner_function

__all__ = [
    "__version__", "kernel_backend",
    # constants
    "HBAR", "K_B", "G_NEWTON", "AMU",
    # parameters and config
    "ParticleSpec", "TrapSpec", "GasSpec", "CollapseParams", "DerivedScales",
    "geometric_mass", "effective_mass", "derive_scales",
    "Config", "InferenceConfig", "OutputConfig", "load_config", "demo_config",
    # rates
    "DiffusionBudget", "RatePoint", "d_pp_gas", "d_pp_trap", "csl_form_factor",
    "diffusion_budget", "gamma_env", "gamma_csl", "gamma_csl_small_sep",
    "gamma_csl_max", "gamma_dp", "gamma_total", "rate_table",
    "cycle_averaged_gamma", "heating_from_dpp", "calibrate_dpp_from_heating",
    # coherence and datasets
    "CoherenceCurve", "RateDataset", "coherence_static", "coherence_dynamic",
    "default_separation_grid", "generate_synthetic_dataset",
    # states and gates
    "FockState", "DensityMatrix", "PositionGrid", "ThermalizationSpec",
    "default_position_grid", "fock_to_position", "coherence_between",
    "coherent_state", "prepare_cat", "displacement", "cat_norm_factor",
    "cat_separation", "ConditionalDisplacementGate",
    "conditional_displacement_gate", "cat_from_gate",
    # open-system evolution
    "EvolutionResult", "evolve_lindblad", "apply_localization_kernel",
    "localization_rate", "dpp_for_localization_rate",
    # Wigner
    "WignerGrid", "wigner_function", "purity_from_wigner",
    # inference
    "PriorSpec", "RateGeometry", "PosteriorResult", "run_mcmc",
    "log_posterior", "gelman_rubin", "hpd_interval", "upper_bound",
    "narrowing_study", "self_consistent_dpp",
    # scans
    "ExclusionMap", "MassScanRow", "scan_exclusion", "critical_lambda",
    "scan_mass", "scan_rates_vs_separation",
    # errors
    "LevicatError", "ConfigurationError", "TruncationError", "NumericalError",
    "ConvergenceError", "LambDickeWarning", "MassOverrideWarning",
]


def kernel_backend() -> str:
    """Name of the active sampling kernel: 'compiled' or 'python'."""
    return _KERNEL_BACKEND
