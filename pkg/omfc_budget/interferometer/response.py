"""主干涉仪的输入输出关系

b₁ = e^{2iβ} a₁
b₂ = e^{2iβ}(a₂ − κ a₁) + e^{iβ}√(2κ)·h/h_SQL
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..constants import HBAR
from ..core.grid import as_omega
from ..core.quadrature import NoiseChannel, mix_loss
from ..errors import InvalidParameterError
from .models import IfoParams


def _check_omega(omega) -> np.ndarray:
    w = as_omega(omega)
    if np.any(~(w > 0)):
        raise InvalidParameterError("干涉仪响应要求 Ω > 0（κ 在 Ω = 0 发散）")
    return w


def kimble_kappa(p: IfoParams, omega) -> np.ndarray:
    """κ = 16 ω₀ I_c γ_ifo/(M Ω² (Ω² + γ_ifo²) L_arm c)"""
    w = _check_omega(omega)
    return p.k0 * p.gamma_ifo / (w**2 * (w**2 + p.gamma_ifo**2))


def sql_psd(p: IfoParams, omega) -> np.ndarray:
    """标准量子极限应变功率谱 S_SQL = 8ħ/(M Ω² L_arm²) (1/Hz)"""
    w = _check_omega(omega)
    return 8.0 * HBAR / (p.mass * w**2 * p.arm_length**2)


def signal_phase(p: IfoParams, omega) -> np.ndarray:
    """β = arctan(Ω/γ_ifo)"""
    w = _check_omega(omega)
    return np.arctan(w / p.gamma_ifo)


def variational_angle(p: IfoParams, omega) -> np.ndarray:
    """θ_vr = arctan κ，此时 b_θ 中 a₁ 的系数恒为零"""
    return np.arctan(kimble_kappa(p, omega))


@dataclass(frozen=True)
class IfoResponse:
    """干涉仪在各频率点的响应

    Attributes:
        transfer: (N, 2, 2) 正交传递矩阵
        signal: (N, 2) 单位 h/h_SQL 的信号响应向量
        channels: 损耗引入的真空通道
    """

    transfer: np.ndarray
    signal: np.ndarray
    channels: tuple[NoiseChannel, ...] = ()


def ifo_in_out(p: IfoParams, omega) -> IfoResponse:
    """无损输入输出：[[e^{2iβ}, 0], [−κ e^{2iβ}, e^{2iβ}]] 与信号 (0, e^{iβ}√(2κ))"""
    w = _check_omega(omega)
    kappa = kimble_kappa(p, w)
    beta = signal_phase(p, w)
    phase2 = np.exp(2j * beta)

    transfer = np.zeros(w.shape + (2, 2), dtype=complex)
    transfer[..., 0, 0] = phase2
    transfer[..., 1, 0] = -kappa * phase2
    transfer[..., 1, 1] = phase2

    signal = np.zeros(w.shape + (2,), dtype=complex)
    signal[..., 1] = np.exp(1j * beta) * np.sqrt(2.0 * kappa)
    return IfoResponse(transfer=transfer, signal=signal)


def lossy_ifo_in_out(p: IfoParams, omega, eps: float) -> IfoResponse:
    """输出端功率损耗 ε：两个正交分量和信号都乘 √(1−ε)，并加入 √ε 的真空通道"""
    if not 0 <= eps < 1:
        raise InvalidParameterError(f"损耗必须位于 [0, 1)，当前 {eps}", key="ifo.circ_loss")
    lossless = ifo_in_out(p, omega)
    transfer, channels = mix_loss(lossless.transfer, eps)
    signal = np.sqrt(1.0 - eps) * lossless.signal
    return IfoResponse(transfer=transfer, signal=signal, channels=tuple(channels))
