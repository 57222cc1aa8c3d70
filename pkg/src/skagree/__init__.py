"""Secret-key capacities, error exponents, and random-binning protocol
simulation for sender-excited broadcast channels."""

from .probability import (
    JointPmf,
    Pmf,
    PmfError,
    binary_entropy,
    bsc_convolve,
    conditional_mutual_information,
    entropy,
    mutual_information,
    renyi_entropy,
)
from .channels import (
    BinaryOnOffParams,
    ChannelError,
    DiscreteBroadcastChannel,
    GaussianInterferenceParams,
    InputDistribution,
    build_binary_onoff,
    expected_cost,
    is_degraded,
    joint_distribution,
    load_channel,
    marginal_channel,
    save_channel,
)
from .capacity import (
    AuxiliarySystem,
    CapacityResult,
    OptimizerConfig,
    aux_cardinality_bounds,
    binary_onoff_optimize,
    binary_onoff_rate,
    degraded_capacity,
    gaussian_capacity,
    general_rate_objective,
    golden_section_max,
    maximize_over_inputs,
    public_rate_requirement,
    rate_split,
    upper_bound,
    upper_bound_with_input,
)
from .exponents import (
    ExponentResult,
    RatePoint,
    optimized_exponents,
    positivity_thresholds,
    region_membership,
    reliability_exponent,
    reliability_objective,
    secrecy_exponent,
    secrecy_objective,
    strong_achievability_bound,
)
from .binning_sim import (
    BudgetError,
    SecretKeyCode,
    SimReport,
    empirical_exponent_fit,
    ensemble_average,
    ensemble_error_bound,
    ensemble_leakage_bound,
    exact_evaluate,
    generate_code,
    mlmap_decode,
    monte_carlo_evaluate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
