"""主激光干涉仪：有质动力响应、SQL、输入输出关系、零差读出与滤波旋转"""

from .calibration import arm_only_gamma, calibrate_gamma_ifo, ponderomotive_constant
from .filter import (
    cavity_rotation_angle,
    cavity_transfer,
    detuned_cavity_reflection,
    detuning_compensation,
    detuning_for_rotation,
    filter_rotation,
    filter_rotation_angle,
    filter_transfer,
    matched_filter,
    resolve_filter,
)
from .models import FilterMode, FilterParams, FilterSpec, IfoParams
from .readout import (
    angle_error_noise,
    angle_error_variance,
    check_signal_projection,
    homodyne_readout,
    loss_sensitivity,
    quadrature_variance,
    readout_vector,
    signal_power,
)
from .response import (
    IfoResponse,
    ifo_in_out,
    kimble_kappa,
    lossy_ifo_in_out,
    signal_phase,
    sql_psd,
    variational_angle,
)

__all__ = [
    "arm_only_gamma",
    "calibrate_gamma_ifo",
    "ponderomotive_constant",
    "cavity_rotation_angle",
    "cavity_transfer",
    "detuned_cavity_reflection",
    "detuning_compensation",
    "detuning_for_rotation",
    "filter_rotation",
    "filter_rotation_angle",
    "filter_transfer",
    "matched_filter",
    "resolve_filter",
    "FilterMode",
    "FilterParams",
    "FilterSpec",
    "IfoParams",
    "angle_error_noise",
    "angle_error_variance",
    "check_signal_projection",
    "homodyne_readout",
    "loss_sensitivity",
    "quadrature_variance",
    "readout_vector",
    "signal_power",
    "IfoResponse",
    "ifo_in_out",
    "kimble_kappa",
    "lossy_ifo_in_out",
    "signal_phase",
    "sql_psd",
    "variational_angle",
]
