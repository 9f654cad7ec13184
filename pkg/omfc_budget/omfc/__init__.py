"""光机频率转换器 (OMFC)

使用方式：
    from omfc_budget.omfc import OmfcParams, derive_rates, exact_conversion_rate

    params = OmfcParams(gamma_opt_override=1e5)
    rates = derive_rates(params)
    t = exact_conversion_rate(params, rates, omega)
"""

from .criterion import CriterionReport, CriterionScheme, Verdict, bound_coefficient, thermal_criterion
from .imperfections import (
    converted_squeeze_level,
    effective_loss,
    thermal_noise_spectrum,
    thermal_occupation,
)
from .models import ConversionModel, OmfcParams, OmfcRates
from .rates import derive_rates, pump_photon_number, zero_point_displacement
from .scattering import (
    ThreeModeScattering,
    adiabatic_conversion_rate,
    adiabatic_in_out,
    conversion_phase_error,
    conversion_rate_leading_order,
    conversion_rotation,
    conversion_transfer,
    exact_conversion_rate,
    full_three_mode_solve,
    ideal_conversion,
    small_parameters,
    thermal_channel,
    three_mode_without_damping,
)

__all__ = [
    "CriterionReport",
    "CriterionScheme",
    "Verdict",
    "bound_coefficient",
    "thermal_criterion",
    "converted_squeeze_level",
    "effective_loss",
    "thermal_noise_spectrum",
    "thermal_occupation",
    "ConversionModel",
    "OmfcParams",
    "OmfcRates",
    "derive_rates",
    "pump_photon_number",
    "zero_point_displacement",
    "ThreeModeScattering",
    "adiabatic_conversion_rate",
    "adiabatic_in_out",
    "conversion_phase_error",
    "conversion_rate_leading_order",
    "conversion_rotation",
    "conversion_transfer",
    "exact_conversion_rate",
    "full_three_mode_solve",
    "ideal_conversion",
    "small_parameters",
    "thermal_channel",
    "three_mode_without_damping",
]
