"""调参目标函数"""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Optional

import numpy as np

from ..constants import TWO_PI
from ..core.grid import FrequencyGrid
from ..errors import InvalidParameterError
from ..interferometer.filter import matched_filter
from ..interferometer.models import FilterMode, FilterParams, FilterSpec
from ..omfc.models import ConversionModel
from ..schemes import SchemeConfig, SchemeRegistry, signed_angle_residual
from .models import ObjectiveKind, TuneSpec, TuneVariableName


def ideal_config(cfg: SchemeConfig) -> SchemeConfig:
    """去掉 OMFC 与读出角不完美的参考配置

    精确滤波旋转、理想转换、T_envir = 0、ε_rt = 0、无抖动、θ_dc = 0；
    外部损耗与注入压缩保持不变。
    """
    return replace(
        cfg,
        filter=FilterSpec(mode=FilterMode.PERFECT),
        conversion_model=ConversionModel.UNITY,
        omfc=replace(cfg.omfc, temperature=0.0, round_trip_loss=0.0),
        omfc_loss_override=None,
        angle_jitter=0.0,
        theta_dc=0.0,
    )


def _totals(cfg: SchemeConfig, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scheme = SchemeRegistry.get_or_raise(cfg.mode)
    return scheme.total(cfg, omega), scheme.total(ideal_config(cfg), omega)


def degradation_at(cfg: SchemeConfig, f_ref: float, grid: Optional[FrequencyGrid] = None) -> float:
    """10·log10(S_h(f_ref)/S_h^ideal(f_ref)) (dB)

    Raises:
        InvalidParameterError: 给定 grid 且 f_ref 不在网格内
    """
    if f_ref <= 0 or (grid is not None and not grid.contains_hz(f_ref)):
        raise InvalidParameterError(f"参考频率 {f_ref} Hz 不在网格内", key="tune.f_ref_hz")
    actual, ideal = _totals(cfg, np.array([TWO_PI * f_ref]))
    return float(10.0 * np.log10(actual[0] / ideal[0]))


def band_omega(f_lo: float, f_hi: float, points: int) -> np.ndarray:
    return TWO_PI * np.geomspace(f_lo, f_hi, points)


def band_integrated_degradation(cfg: SchemeConfig, f_lo: float, f_hi: float, points: int = 30) -> float:
    """频带内（对数采样）平均的 dB 退化"""
    actual, ideal = _totals(cfg, band_omega(f_lo, f_hi, points))
    return float(np.mean(10.0 * np.log10(actual / ideal)))


def band_angle_residual(cfg: SchemeConfig, f_lo: float, f_hi: float, points: int = 30) -> float:
    """频带内平均的 |δθ|² (rad²)"""
    residual = signed_angle_residual(cfg, band_omega(f_lo, f_hi, points))
    return float(np.mean(residual**2))


def objective_value(cfg: SchemeConfig, spec: TuneSpec) -> float:
    if spec.objective is ObjectiveKind.DEGRADATION_AT:
        return degradation_at(cfg, spec.f_ref_hz)
    f_lo, f_hi = spec.band_hz
    if spec.objective is ObjectiveKind.BAND_INTEGRATED:
        return band_integrated_degradation(cfg, f_lo, f_hi, spec.band_points)
    return band_angle_residual(cfg, f_lo, f_hi, spec.band_points)


# ---------- 变量与配置之间的映射 ----------


def _filter_params(cfg: SchemeConfig) -> FilterParams:
    if cfg.filter.params is not None:
        return cfg.filter.params
    return matched_filter(cfg.ifo)


def current_values(cfg: SchemeConfig, names: list[str]) -> dict[str, float]:
    """配置中各自由变量的当前值（精确滤波时以匹配失谐腔为起点）"""
    params = _filter_params(cfg)
    lookup = {
        TuneVariableName.DETUNING.value: params.detuning,
        TuneVariableName.BANDWIDTH.value: params.bandwidth,
        TuneVariableName.THETA_DC.value: cfg.theta_dc,
    }
    return {name: float(lookup[name]) for name in names}


def apply_values(cfg: SchemeConfig, values: Mapping[str, float]) -> SchemeConfig:
    """把变量取值代入配置；涉及滤波腔时改为 explicit 模式"""
    changes: dict = {}
    if TuneVariableName.THETA_DC.value in values:
        changes["theta_dc"] = float(values[TuneVariableName.THETA_DC.value])
    if TuneVariableName.DETUNING.value in values or TuneVariableName.BANDWIDTH.value in values:
        params = _filter_params(cfg)
        params = FilterParams(
            detuning=float(values.get(TuneVariableName.DETUNING.value, params.detuning)),
            bandwidth=float(values.get(TuneVariableName.BANDWIDTH.value, params.bandwidth)),
        )
        changes["filter"] = FilterSpec(mode=FilterMode.EXPLICIT, params=params)
    return replace(cfg, **changes) if changes else cfg
