"""零差读出与角度误差

读出分量 b_θ = b₁ sinθ + b₂ cosθ，噪声按信号投影归一化为应变功率谱。
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ..core.quadrature import ChannelLike, as_channel, vacuum
from ..errors import InvalidParameterError
from .models import IfoParams
from .response import kimble_kappa, sql_psd, variational_angle

SMALL_ANGLE_LIMIT = 0.1
# |v·s|² ≤ NULL_SIGNAL_RATIO·|s|² 时 cosθ 已在舍入误差内为零
NULL_SIGNAL_RATIO = 1e-24


def readout_vector(theta) -> np.ndarray:
    """(sinθ, cosθ)，形状 (N, 2)"""
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    return np.stack([np.sin(t), np.cos(t)], axis=-1)


def quadrature_variance(vector: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    """v S v†，v 可为复向量"""
    v = np.asarray(vector)
    return np.real(np.einsum("...i,...ij,...j->...", v, spectrum, np.conj(v)))


def signal_power(vector: np.ndarray, signal: np.ndarray) -> np.ndarray:
    """|v·s|²"""
    return np.abs(np.einsum("...i,...i->...", vector, signal)) ** 2


def check_signal_projection(power: np.ndarray, signal: np.ndarray, key: str = "scheme.readout_angle_rad") -> None:
    """信号投影相对 |s|² 小于 NULL_SIGNAL_RATIO 时视为被零差角抵消

    Raises:
        InvalidParameterError: 某个频率点 cosθ ≈ 0
    """
    norm = np.real(np.einsum("...i,...i->...", signal, np.conj(signal)))
    if np.any(power <= NULL_SIGNAL_RATIO * norm):
        raise InvalidParameterError("零差角使信号投影为零 (cosθ = 0)", key=key)


def project(vector: np.ndarray, transfer: np.ndarray) -> np.ndarray:
    """读出向量左乘传递矩阵 v·T"""
    return np.einsum("...i,...ij->...j", vector, transfer)


def homodyne_readout(
    transfer: np.ndarray,
    signal: np.ndarray,
    theta,
    sql: np.ndarray,
    input_spectrum: np.ndarray | None = None,
    channels: Iterable[ChannelLike] = (),
) -> np.ndarray:
    """应变参考的噪声谱 S_h = S_SQL·Σ (v T) S (v T)†/|v·s|²

    先投影到读出向量再求方差，避免 T S T† 中 O(κ²) 项相消丢失精度。

    Args:
        transfer: 输入到读出的传递矩阵
        signal: 读出端信号响应向量
        theta: 零差角（标量或逐频率）
        sql: S_SQL(Ω)
        input_spectrum: 输入谱，默认真空
        channels: 附加噪声通道

    Raises:
        InvalidParameterError: 信号投影为零（cosθ = 0）
    """
    s_in = vacuum() if input_spectrum is None else input_spectrum
    v = readout_vector(theta)
    power = signal_power(v, signal)
    check_signal_projection(power, signal)
    variance = quadrature_variance(project(v, transfer), s_in)
    for ch in map(as_channel, channels):
        variance = variance + quadrature_variance(project(v, ch.transfer), ch.spectrum)
    return sql * variance / power


def loss_sensitivity(p: IfoParams, omega, eps: float) -> np.ndarray:
    """变分读出 + 输出损耗 ε 的解析灵敏度

    S_h = (S_SQL/2κ)·[1 + ε/((1−ε) cos²θ_vr)]
    """
    if not 0 <= eps < 1:
        raise InvalidParameterError(f"损耗必须位于 [0, 1)，当前 {eps}")
    kappa = kimble_kappa(p, omega)
    cos2 = np.cos(variational_angle(p, omega)) ** 2
    return sql_psd(p, omega) / (2.0 * kappa) * (1.0 + eps / ((1.0 - eps) * cos2))


def _check_small_angle(delta_theta) -> np.ndarray:
    d = np.asarray(delta_theta, dtype=float)
    if np.any(np.abs(d) >= SMALL_ANGLE_LIMIT):
        raise InvalidParameterError(
            f"角度误差 {np.max(np.abs(d)):.3g} rad 超出小角近似范围 (< {SMALL_ANGLE_LIMIT})",
            key="scheme.angle_jitter_rad",
        )
    return d


def angle_error_variance(kappa, delta_theta) -> np.ndarray:
    """角度误差引入的正交分量方差 (1+κ²)δθ²（相对于 a₁ 真空）"""
    d = _check_small_angle(delta_theta)
    return (1.0 + np.asarray(kappa) ** 2) * d**2


def angle_error_noise(p: IfoParams, omega, delta_theta) -> np.ndarray:
    """残余辐射压噪声 δb_θ = (1+κ²) cosθ_vr δθ a₁ 折算到应变

    S = S_SQL (1+κ²)² δθ²/(2κ)
    """
    d = _check_small_angle(delta_theta)
    kappa = kimble_kappa(p, omega)
    return sql_psd(p, omega) * (1.0 + kappa**2) ** 2 * d**2 / (2.0 * kappa)
