"""失谐滤波腔的正交旋转

两种旋转角：
    filter_rotation_angle: ξ = atan2(2Ωγ_f, Δ_f² − Ω² + γ_f²)
    cavity_rotation_angle: 由失谐腔边带反射 r(ω) = (γ + i(ω+Δ))/(γ − i(ω+Δ))
        得到的旋转 ψ = atan2(2Δγ, γ² − Δ² + Ω²)，对 Ω 偶函数
方案流水线使用后者；Δ = γ = √(K′/2) 时 ψ ≈ arctan κ。
"""

from __future__ import annotations

import numpy as np

from ..core.grid import as_omega
from ..core.quadrature import rotation, sideband_response
from ..errors import InvalidParameterError
from .models import FilterMode, FilterParams, FilterSpec, IfoParams
from .response import variational_angle


def filter_rotation_angle(f: FilterParams, omega) -> np.ndarray:
    """ξ = atan2(2Ωγ_f, Δ_f² − Ω² + γ_f²)"""
    w = as_omega(omega)
    return np.arctan2(2.0 * w * f.bandwidth, f.detuning**2 - w**2 + f.bandwidth**2)


def detuned_cavity_reflection(f: FilterParams):
    """返回边带反射函数 r(ω)"""

    def response(w: np.ndarray) -> np.ndarray:
        x = w + f.detuning
        return (f.bandwidth + 1j * x) / (f.bandwidth - 1j * x)

    return response


def cavity_rotation_angle(f: FilterParams, omega) -> np.ndarray:
    """失谐腔反射对正交分量的旋转 ψ = atan2(2Δγ, γ² − Δ² + Ω²)"""
    w = as_omega(omega)
    return np.arctan2(
        2.0 * f.detuning * f.bandwidth,
        f.bandwidth**2 - f.detuning**2 + w**2,
    )


def cavity_transfer(f: FilterParams, omega) -> np.ndarray:
    """失谐腔反射的正交传递矩阵（旋转 ψ 乘一个公共相位）"""
    return sideband_response(detuned_cavity_reflection(f), as_omega(omega))


def matched_filter(ifo: IfoParams) -> FilterParams:
    """Δ_f = γ_f = √(K′/2)，低频时 ψ 与 arctan κ 一致"""
    value = float(np.sqrt(ifo.k_prime / 2.0))
    return FilterParams(detuning=value, bandwidth=value)


def filter_rotation(spec: FilterSpec, ifo: IfoParams, omega) -> np.ndarray:
    """按滤波模式给出每个频率点的旋转角"""
    w = as_omega(omega)
    if spec.mode is FilterMode.PERFECT:
        return variational_angle(ifo, w)
    return cavity_rotation_angle(spec.params, w)


def filter_transfer(spec: FilterSpec, ifo: IfoParams, omega) -> np.ndarray:
    """按滤波模式给出正交传递矩阵"""
    w = as_omega(omega)
    if spec.mode is FilterMode.PERFECT:
        return rotation(variational_angle(ifo, w))
    return cavity_transfer(spec.params, w)


def resolve_filter(mode: FilterMode | str, ifo: IfoParams, params: FilterParams | None = None) -> FilterSpec:
    """把模式解析为 FilterSpec；MATCHED 时计算匹配参数"""
    mode = FilterMode(mode)
    if mode is FilterMode.MATCHED:
        return FilterSpec(mode=mode, params=matched_filter(ifo))
    if mode is FilterMode.EXPLICIT and params is None:
        raise InvalidParameterError("explicit 模式需要 detuning_hz 与 bandwidth_hz", key="filter.mode")
    return FilterSpec(mode=mode, params=params if mode is FilterMode.EXPLICIT else None)


def detuning_compensation(delta_detuning, omega, bandwidth: float) -> np.ndarray:
    """失谐偏移 δΔ 引起的旋转变化 δξ ≈ δΔ/(Ω γ_f)，适用于 Δ_f ∼ γ_f"""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)) or bandwidth <= 0:
        raise InvalidParameterError("detuning_compensation 要求 Ω > 0 且 γ_f > 0")
    return np.asarray(delta_detuning, dtype=float) / (w * bandwidth)


def detuning_for_rotation(delta_xi, omega, bandwidth: float) -> np.ndarray:
    """detuning_compensation 的逆：产生 δξ 所需的失谐偏移 δΔ = δξ·Ω·γ_f"""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)) or bandwidth <= 0:
        raise InvalidParameterError("detuning_for_rotation 要求 Ω > 0 且 γ_f > 0")
    return np.asarray(delta_xi, dtype=float) * w * bandwidth
