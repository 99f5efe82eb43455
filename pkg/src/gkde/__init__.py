"""Gamma kernel density estimation on [0, infinity).

Primitives (kernel, exact quadrature functionals, test densities), Monte
Carlo L^p risk, and an experiment harness that verifies convergence-rate
regimes and closed-form bounds. A compiled extension accelerates the kernel
sums when available; a NumPy fallback is selected automatically (override
with GKDE_BACKEND=python|compiled).
"""

__version__ = "0.1.0"

from .core import BACKEND_NAME, active_backend
from .densities import (
    HolderClass,
    Mollified,
    TestDensity,
    bump_density,
    density_from_json,
    holder_member_mirrored,
    holder_quotient_scan,
    linear_tilt,
    mirrored_gamma,
    mollify,
    molli_bump,
    molli_linear,
    molli_uniform,
    raw_uniform,
    sample,
)
from .errors import (
    BandwidthTooLarge,
    EnvelopeViolation,
    GkdeError,
    NegativeMass,
    NumericalError,
    QuadratureNonConvergence,
    ValidationError,
)
from .estimator import EstimatorConfig, bandwidth_rule, default_grid, estimate
from .experiments import (
    RateFit,
    RegimeCell,
    bump_bias_experiment,
    endpoint_leakage,
    fit_loglog,
    fluctuation_floor,
    linear_bias_experiment,
    oracle_bandwidth_grid,
    oracle_bandwidth_slope,
    predicted_regime,
    rate_experiment,
    regime_map,
    regularity_scan,
    stagnant_bandwidth_check,
    stagnant_event_bound,
    variance_floor_scan,
)
from .kernel import (
    KernelBounds,
    KernelPoint,
    chernoff_unit_tail,
    kernel_bounds,
    kernel_mean_var,
    kernel_pdf,
    kernel_pdf_grid,
    l2_integral,
    l2_integral_ratio_form,
    local_ratio,
    sample_kernel,
    sup_on_unit_interval,
    tail_prob,
)
from .risk import (
    RiskReport,
    bias_term,
    exact_mean_curve,
    exact_mean_estimate,
    fluctuation_l1,
    mc_risk,
    pointwise_variance,
    tail_mass_bound,
    variance_floor_integral,
)
from .specfun import log_gamma, reg_gamma_upper, stirling_ratio

__all__ = [
    "__version__",
    "BACKEND_NAME",
    "active_backend",
    "HolderClass",
    "Mollified",
    "TestDensity",
    "bump_density",
    "density_from_json",
    "holder_member_mirrored",
    "holder_quotient_scan",
    "linear_tilt",
    "mirrored_gamma",
    "mollify",
    "molli_bump",
    "molli_linear",
    "molli_uniform",
    "raw_uniform",
    "sample",
    "BandwidthTooLarge",
    "EnvelopeViolation",
    "GkdeError",
    "NegativeMass",
    "NumericalError",
    "QuadratureNonConvergence",
    "ValidationError",
    "EstimatorConfig",
    "bandwidth_rule",
    "default_grid",
    "estimate",
    "RateFit",
    "RegimeCell",
    "bump_bias_experiment",
    "endpoint_leakage",
    "fit_loglog",
    "fluctuation_floor",
    "linear_bias_experiment",
    "oracle_bandwidth_grid",
    "oracle_bandwidth_slope",
    "predicted_regime",
    "rate_experiment",
    "regime_map",
    "regularity_scan",
    "stagnant_bandwidth_check",
    "stagnant_event_bound",
    "variance_floor_scan",
    "KernelBounds",
    "KernelPoint",
    "chernoff_unit_tail",
    "kernel_bounds",
    "kernel_mean_var",
    "kernel_pdf",
    "kernel_pdf_grid",
    "l2_integral",
    "l2_integral_ratio_form",
    "local_ratio",
    "sample_kernel",
    "sup_on_unit_interval",
    "tail_prob",
    "RiskReport",
    "bias_term",
    "exact_mean_curve",
    "exact_mean_estimate",
    "fluctuation_l1",
    "mc_risk",
    "pointwise_variance",
    "tail_mass_bound",
    "variance_floor_integral",
    "log_gamma",
    "reg_gamma_upper",
    "stirling_ratio",
]
