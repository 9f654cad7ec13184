"""探测器方案：把 OMFC 与干涉仪模块组合成噪声预算

使用方式：
    from omfc_budget.schemes import SchemeConfig, SchemeMode, compute_budget

    cfg = SchemeConfig(mode=SchemeMode.VARIATIONAL_READOUT)
    budget = compute_budget(cfg, grid)
    frame = budget.to_frame()
"""

from ..core.grid import FrequencyGrid
from .base import BaseScheme
from .chain import ReadoutChain
from .models import (
    COMPONENT_KEYS,
    InputField,
    NoiseBudget,
    ReadoutKind,
    ReadoutPolicy,
    SchemeConfig,
    SchemeMode,
)
from .registry import SchemeRegistry, baseline_total

# 自动注册内置方案
from .baseline import BaselineScheme, baseline_budget
from .fd_squeezing import FdSqueezingScheme, fd_squeezing_budget
from .variational import VariationalReadoutScheme, variational_readout_budget
from .residual import residual_angle_error, signed_angle_residual, wrap_half_pi


def compute_budget(cfg: SchemeConfig, grid: FrequencyGrid) -> NoiseBudget:
    """按 cfg.mode 选择方案并计算噪声预算"""
    return SchemeRegistry.get_or_raise(cfg.mode).budget(cfg, grid)


__all__ = [
    "BaseScheme",
    "ReadoutChain",
    "COMPONENT_KEYS",
    "InputField",
    "NoiseBudget",
    "ReadoutKind",
    "ReadoutPolicy",
    "SchemeConfig",
    "SchemeMode",
    "SchemeRegistry",
    "baseline_total",
    "BaselineScheme",
    "baseline_budget",
    "FdSqueezingScheme",
    "fd_squeezing_budget",
    "VariationalReadoutScheme",
    "variational_readout_budget",
    "residual_angle_error",
    "signed_angle_residual",
    "wrap_half_pi",
    "compute_budget",
]
