"""有效零差角相对 arctan κ 的残差"""

from __future__ import annotations

import numpy as np

from ..core.grid import FrequencyGrid, as_omega
from ..errors import InvalidParameterError
from ..interferometer.filter import filter_rotation
from ..interferometer.response import variational_angle
from ..omfc.scattering import conversion_phase_error
from .models import SchemeConfig, SchemeMode


def wrap_half_pi(angle) -> np.ndarray:
    """把角度折回 (−π/2, π/2]（正交旋转以 π 为周期）"""
    return np.pi / 2 - np.mod(np.pi / 2 - np.asarray(angle, dtype=float), np.pi)


def signed_angle_residual(cfg: SchemeConfig, omega) -> np.ndarray:
    """δθ(Ω) = θ_dc + 滤波旋转 + OMFC 旋转 − arctan κ（带符号）

    频率相关压缩方案中 δθ 是注入压缩角的误差（不含 θ_dc）。
    """
    if cfg.mode not in (SchemeMode.VARIATIONAL_READOUT, SchemeMode.FD_SQUEEZING):
        raise InvalidParameterError(
            f"角度残差只对变分读出与频率相关压缩方案有定义，当前 {cfg.mode.value}",
            key="scheme.mode",
        )
    w = as_omega(omega)
    realized = filter_rotation(cfg.filter, cfg.ifo, w)
    realized = realized + conversion_phase_error(cfg.conversion_model, cfg.omfc, cfg.rates, w)
    if cfg.mode is SchemeMode.VARIATIONAL_READOUT:
        realized = realized + cfg.theta_dc
    return wrap_half_pi(realized - variational_angle(cfg.ifo, w))


def residual_angle_error(cfg: SchemeConfig, grid: FrequencyGrid | np.ndarray) -> np.ndarray:
    """|δθ(Ω)| (rad)"""
    return np.abs(signed_angle_residual(cfg, as_omega(grid)))
