"""OMFC 的退相干通道：有效光学损耗、热噪声与转换后的压缩量"""

from __future__ import annotations

import numpy as np

from ..constants import C, HBAR, K_B
from ..core.grid import as_omega
from ..core.quadrature import (
    SqueezedState,
    idle_port,
    mix_loss,
    propagate,
    sideband_matrix,
    squeezed_spectrum,
    vacuum,
)
from ..core.units import db
from ..errors import NumericalError
from .models import OmfcParams, OmfcRates
from .scattering import adiabatic_conversion_rate, thermal_channel


def _lorentzian(r: OmfcRates, omega: np.ndarray) -> np.ndarray:
    g2 = r.gamma_opt**2
    return g2 / (g2 + omega**2)


def effective_loss(p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """ε_OMFC = (c ε_rt/(L γ))·γ_opt²/(γ_opt² + Ω²)

    Raises:
        NumericalError: 推导出的损耗 ≥ 1
    """
    w = as_omega(omega)
    dc = C * p.round_trip_loss / (p.length_mean * p.gamma_mean)
    if dc >= 1:
        raise NumericalError(
            f"omfc.round_trip_loss: 有效损耗 {dc:.4f} ≥ 1，往返损耗过大或腔带宽过窄"
        )
    return dc * _lorentzian(r, w)


def thermal_occupation(p: OmfcParams) -> float:
    """高温极限下的热占据数 n̄ = k_B T/(ħ ω_m)"""
    return K_B * p.temperature / (HBAR * p.omega_m)


def thermal_noise_spectrum(p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """真空归一的热噪声谱 S_th = (8 k_B T/(ħ γ_opt Q_m))·γ_opt²/(γ_opt² + Ω²)"""
    w = as_omega(omega)
    dc = 8.0 * K_B * p.temperature / (HBAR * r.gamma_opt * p.q_m)
    return dc * _lorentzian(r, w)


def converted_squeeze_level(p: OmfcParams, r: OmfcRates, state: SqueezedState, omega) -> np.ndarray:
    """压缩光经 OMFC 转换后的压缩量 (dB，压缩为正)

    依次施加绝热散射（含空闲端口真空）、热浴通道（占据 2n̄+1）和有效损耗，
    取输出谱的最小特征值作为压缩分量方差。
    """
    w = as_omega(omega)
    n = w.size

    t_plus = adiabatic_conversion_rate(r, w)
    t_minus = adiabatic_conversion_rate(r, -w)
    transfer = sideband_matrix(t_plus, np.conj(t_minus))
    idle = idle_port(t_plus, np.conj(t_minus))

    k_plus, _ = thermal_channel(r, p.gamma_m, w)
    k_minus, _ = thermal_channel(r, p.gamma_m, -w)
    thermal = sideband_matrix(k_plus, np.conj(k_minus))
    occupation = 2.0 * thermal_occupation(p) + 1.0

    s_conv = propagate(
        squeezed_spectrum(state),
        transfer,
        [(idle, vacuum()), (thermal, occupation * vacuum())],
    )
    scaled, loss_channels = mix_loss(np.broadcast_to(np.eye(2), (n, 2, 2)), effective_loss(p, r, w))
    s_out = propagate(s_conv, scaled, loss_channels)

    variance = np.linalg.eigvalsh(s_out)[..., 0]
    return -db(variance)
