"""Secure rate-splitting multiple access over land-mobile-satellite channels.

Closed-form ergodic rates (common, private, eavesdrop, secrecy, sum) under
MRT-MF precoding with imperfect CSI on Shadowed-Rician fading, validated
end to end by a seeded Monte-Carlo oracle.
"""

from .params import (
    ScenarioParams,
    SnrSpec,
    SystemConfig,
    apply_snr,
    preset,
    preset_names,
    symmetric_config,
    validate,
)
from .moments import (
    DegenerateConfigError,
    ElementMoments,
    MomentTable,
    alpha,
    element_moments,
    gamma_half_ratio,
    moment_table,
    third_moment_identity,
)
from .channel import (
    ChannelSet,
    Precoders,
    block_rng,
    build_precoders,
    sample_channels,
    sample_sr_element,
    sample_sr_elements,
)
from .sinr import SinrSample, sinr_all, sinr_common, sinr_eavesdrop, sinr_private
from .rates import (
    ClosedFormRates,
    closed_form_rates,
    rate_common_cf,
    rate_eavesdrop_cf,
    rate_private_cf,
    rate_secrecy_cf,
    rate_sum_cf,
)
from .montecarlo import (
    McEstimate,
    McRateReport,
    PowerCheck,
    SuiteReport,
    ergodic_rates,
    estimate_moments,
    power_check,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "ScenarioParams",
    "SnrSpec",
    "SystemConfig",
    "apply_snr",
    "preset",
    "preset_names",
    "symmetric_config",
    "validate",
    "DegenerateConfigError",
    "ElementMoments",
    "MomentTable",
    "alpha",
    "element_moments",
    "gamma_half_ratio",
    "moment_table",
    "third_moment_identity",
    "ChannelSet",
    "Precoders",
    "block_rng",
    "build_precoders",
    "sample_channels",
    "sample_sr_element",
    "sample_sr_elements",
    "SinrSample",
    "sinr_all",
    "sinr_common",
    "sinr_eavesdrop",
    "sinr_private",
    "ClosedFormRates",
    "closed_form_rates",
    "rate_common_cf",
    "rate_eavesdrop_cf",
    "rate_private_cf",
    "rate_secrecy_cf",
    "rate_sum_cf",
    "McEstimate",
    "McRateReport",
    "PowerCheck",
    "SuiteReport",
    "ergodic_rates",
    "estimate_moments",
    "power_check",
    "run_suite",
]
