"""有效探测器带宽 γ_ifo 的标定"""

from __future__ import annotations

import numpy as np
from loguru import logger

from ..constants import C, TWO_PI
from ..errors import InvalidParameterError, NumericalError


def ponderomotive_constant(omega_0: float, arm_power: float, mass: float, arm_length: float) -> float:
    """16 ω₀ I_c/(M L_arm c)，κ = 该常数·γ_ifo/(Ω²(Ω² + γ_ifo²))"""
    return 16.0 * omega_0 * arm_power / (mass * arm_length * C)


def calibrate_gamma_ifo(k0: float, kappa_sq_target: float, f_hz: float) -> float:
    """求 γ_ifo 使 κ²(2π f) 等于目标值

    κ Ω² = k0 γ/(Ω² + γ²) 是关于 γ 的二次方程，取较大的根
    （宽带探测器一侧）。

    Raises:
        NumericalError: 目标 κ 超过该功率下能达到的最大值（无实根）
    """
    if kappa_sq_target <= 0 or f_hz <= 0:
        raise InvalidParameterError("κ² 目标与标定频率必须为正", key="ifo.kappa_target_sq")
    omega = TWO_PI * f_hz
    kappa = np.sqrt(kappa_sq_target)
    # γ² − (k0/(κΩ²)) γ + Ω² = 0
    b = k0 / (kappa * omega**2)
    disc = b**2 - 4.0 * omega**2
    if disc < 0:
        raise NumericalError(
            f"ifo.kappa_target_sq: 在 {f_hz} Hz 处无法达到 κ² = {kappa_sq_target:.4e}"
        )
    gamma = 0.5 * (b + np.sqrt(disc))
    logger.debug("γ_ifo 标定: κ²({} Hz) = {:.4e} → γ_ifo = {:.6e} rad/s", f_hz, kappa_sq_target, gamma)
    return float(gamma)


def arm_only_gamma(t_itm: float, arm_length: float) -> float:
    """仅由臂腔决定的半带宽 T_ITM·c/(4 L_arm)"""
    return t_itm * C / (4.0 * arm_length)
