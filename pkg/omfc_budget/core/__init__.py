"""量子光学基础：频率网格、正交分量代数、谱传播与 dB 换算"""

from .grid import FrequencyGrid, Spacing, as_omega, make_frequency_grid
from .quadrature import (
    IDENTITY,
    NoiseChannel,
    SqueezedState,
    as_channel,
    dagger,
    idle_port,
    is_physical_spectrum,
    mix_loss,
    propagate,
    rotation,
    rotation_angle_of,
    sandwich,
    sideband_matrix,
    sideband_response,
    squeezed_spectrum,
    vacuum,
)
from .units import db, from_db, squeeze_db_from_factor, squeeze_factor_from_db

__all__ = [
    "FrequencyGrid",
    "Spacing",
    "as_omega",
    "make_frequency_grid",
    "IDENTITY",
    "NoiseChannel",
    "SqueezedState",
    "as_channel",
    "dagger",
    "idle_port",
    "is_physical_spectrum",
    "mix_loss",
    "propagate",
    "rotation",
    "rotation_angle_of",
    "sandwich",
    "sideband_matrix",
    "sideband_response",
    "squeezed_spectrum",
    "vacuum",
    "db",
    "from_db",
    "squeeze_db_from_factor",
    "squeeze_factor_from_db",
]
