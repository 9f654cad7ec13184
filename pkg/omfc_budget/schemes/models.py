"""方案配置与噪声预算"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np
import pandas as pd

from ..core.grid import FrequencyGrid
from ..core.quadrature import SqueezedState
from ..errors import InvalidParameterError
from ..interferometer.filter import resolve_filter
from ..interferometer.models import FilterMode, FilterSpec, IfoParams
from ..interferometer.readout import SMALL_ANGLE_LIMIT
from ..omfc.models import ConversionModel, OmfcParams, OmfcRates
from ..omfc.rates import derive_rates


class SchemeMode(str, Enum):
    FD_SQUEEZING = "fd_squeezing"
    VARIATIONAL_READOUT = "variational_readout"
    BASELINE_VACUUM = "baseline_vacuum"
    BASELINE_FIXED_SQUEEZE = "baseline_fixed_squeeze"


class ReadoutKind(str, Enum):
    VARIATIONAL = "variational"
    FIXED = "fixed"


class InputField(str, Enum):
    """变分读出方案的干涉仪输入"""

    VACUUM = "vacuum"
    SQUEEZED = "squeezed"


@dataclass(frozen=True)
class ReadoutPolicy:
    """零差角策略

    VARIATIONAL: 零差角随频率取 arctan κ（由滤波旋转或直接设定实现）
    FIXED: 固定零差角 angle
    """

    kind: ReadoutKind = ReadoutKind.FIXED
    angle: float = 0.0

    @property
    def fixed_angle(self) -> float:
        return self.angle if self.kind is ReadoutKind.FIXED else 0.0


# 噪声预算分量，顺序即 CSV 列顺序
COMPONENT_KEYS: tuple[str, ...] = (
    "quantum_shot",
    "quantum_backaction",
    "omfc_thermal",
    "omfc_loss",
    "angle_error",
    "external_loss",
)


@dataclass(frozen=True)
class SchemeConfig:
    """一个探测器方案的完整物理配置

    Attributes:
        mode: 方案
        omfc: 转换器参数
        ifo: 主干涉仪参数
        filter: 滤波旋转设置
        input_squeeze: 注入压缩态
        readout: 零差角策略
        conversion_model: 预算中使用的转换模型
        angle_jitter: 本振角度均方根抖动 δθ_extra (rad)
        theta_dc: 直流零差角偏置 (rad)
        omfc_loss_override: 强制的 ε_OMFC；None 时按往返损耗推导
        variational_input: 变分读出方案的输入场
    """

    mode: SchemeMode = SchemeMode.FD_SQUEEZING
    omfc: OmfcParams = field(default_factory=OmfcParams)
    ifo: IfoParams = field(default_factory=IfoParams)
    filter: Optional[FilterSpec] = None
    input_squeeze: SqueezedState = field(default_factory=lambda: SqueezedState.from_db(12.0))
    readout: ReadoutPolicy = field(default_factory=ReadoutPolicy)
    conversion_model: ConversionModel = ConversionModel.EXACT
    angle_jitter: float = 0.0
    theta_dc: float = 0.0
    omfc_loss_override: Optional[float] = None
    variational_input: InputField = InputField.VACUUM

    def __post_init__(self) -> None:
        if self.filter is None:
            object.__setattr__(self, "filter", resolve_filter(FilterMode.MATCHED, self.ifo))
        if not 0 <= self.angle_jitter < SMALL_ANGLE_LIMIT:
            raise InvalidParameterError(
                f"角度抖动必须位于 [0, {SMALL_ANGLE_LIMIT})，当前 {self.angle_jitter}",
                key="scheme.angle_jitter_rad",
            )
        if not np.isfinite(self.theta_dc):
            raise InvalidParameterError("直流零差角偏置必须为有限值", key="scheme.theta_dc_rad")
        if self.omfc_loss_override is not None and not 0 <= self.omfc_loss_override < 1:
            raise InvalidParameterError(
                f"必须位于 [0, 1)，当前 {self.omfc_loss_override}", key="omfc.loss_override"
            )

    @property
    def rates(self) -> OmfcRates:
        return derive_rates(self.omfc)


@dataclass(frozen=True)
class NoiseBudget:
    """逐频率的应变噪声预算（1/Hz）

    total 由各分量求和得到，可加性是结构上的恒等式。

    Attributes:
        grid: 频率网格
        components: COMPONENT_KEYS → S_h(Ω)
        references: {"sql": S_SQL(Ω), "baseline": 无 OMFC 时的 S_h(Ω)}
        metadata: 方案与推导量
    """

    grid: FrequencyGrid
    components: dict[str, np.ndarray]
    references: dict[str, np.ndarray]
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def total(self) -> np.ndarray:
        out = np.zeros(len(self.grid))
        for key in COMPONENT_KEYS:
            out = out + self.components[key]
        return out

    def to_frame(self, components: tuple[str, ...] = COMPONENT_KEYS) -> pd.DataFrame:
        """转为按频率升序的表格，列名带单位"""
        columns: dict[str, np.ndarray] = {
            "frequency_Hz": self.grid.frequencies_hz,
            "S_total_per_Hz": self.total,
        }
        for key in components:
            columns[f"S_{key}_per_Hz"] = self.components[key]
        columns["S_sql_per_Hz"] = self.references["sql"]
        columns["S_baseline_per_Hz"] = self.references["baseline"]
        return pd.DataFrame(columns)
