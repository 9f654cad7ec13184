"""调参规格与结果"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..core.grid import FrequencyGrid
from ..errors import InvalidParameterError


class TuneVariableName(str, Enum):
    """可调变量：滤波腔失谐、滤波腔带宽 (rad/s) 与直流零差角偏置 (rad)"""

    DETUNING = "detuning"
    BANDWIDTH = "bandwidth"
    THETA_DC = "theta_dc"


class ObjectiveKind(str, Enum):
    DEGRADATION_AT = "degradation_at"
    BAND_INTEGRATED = "band_integrated"
    ANGLE_RESIDUAL = "angle_residual"


class TuneStatus(str, Enum):
    CONVERGED = "CONVERGED"
    NOT_CONVERGED = "NOT_CONVERGED"


@dataclass(frozen=True)
class TuneVariable:
    name: TuneVariableName
    lower: float
    upper: float

    def __post_init__(self) -> None:
        key = f"tune.variables.{self.name.value}"
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)) or self.lower >= self.upper:
            raise InvalidParameterError(f"边界必须有限且 lower < upper，当前 [{self.lower}, {self.upper}]", key=key)
        if self.name is TuneVariableName.BANDWIDTH and self.lower <= 0:
            raise InvalidParameterError("滤波腔带宽下界必须为正", key=key)


@dataclass(frozen=True)
class TuneSpec:
    """调参规格

    Attributes:
        variables: 自由变量及边界
        objective: 目标函数
        f_ref_hz: degradation_at 的参考频率
        band_hz: 频带目标的 (f_lo, f_hi)
        band_points: 频带内对数采样点数
        tolerance: 目标函数收敛容差（dB 或 rad²）
        x_tolerance: 归一化变量的收敛容差
        max_evals: 最大评估次数
        scan_points: 粗扫描每维点数
    """

    variables: tuple[TuneVariable, ...]
    objective: ObjectiveKind = ObjectiveKind.DEGRADATION_AT
    f_ref_hz: float = 3.0
    band_hz: tuple[float, float] = (1.0, 30.0)
    band_points: int = 30
    tolerance: float = 1e-4
    x_tolerance: float = 1e-4
    max_evals: int = 400
    scan_points: int = 5

    def __post_init__(self) -> None:
        if not self.variables:
            raise InvalidParameterError("至少需要一个自由变量", key="tune.variables")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise InvalidParameterError("自由变量不能重复", key="tune.variables")
        if self.max_evals < 1:
            raise InvalidParameterError("max_evals 必须 ≥ 1", key="tune.max_evals")
        if self.scan_points < 1:
            raise InvalidParameterError("scan_points 必须 ≥ 1", key="tune.scan_points")
        if not 0 < self.band_hz[0] < self.band_hz[1]:
            raise InvalidParameterError("频带必须满足 0 < f_lo < f_hi", key="tune.band_lo_hz")
        if self.band_points < 2:
            raise InvalidParameterError("band_points 必须 ≥ 2", key="tune.band_points")

    @property
    def names(self) -> list[str]:
        return [v.name.value for v in self.variables]

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [(v.lower, v.upper) for v in self.variables]

    def check_grid(self, grid: FrequencyGrid) -> None:
        """参考频率与频带必须落在网格内"""
        if self.objective is ObjectiveKind.DEGRADATION_AT:
            if not grid.contains_hz(self.f_ref_hz):
                raise InvalidParameterError(f"参考频率 {self.f_ref_hz} Hz 不在网格内", key="tune.f_ref_hz")
        elif not (grid.contains_hz(self.band_hz[0]) and grid.contains_hz(self.band_hz[1])):
            raise InvalidParameterError(f"频带 {self.band_hz} Hz 不在网格内", key="tune.band_lo_hz")


@dataclass(frozen=True)
class TraceEntry:
    """一次目标函数评估

    Attributes:
        index: 评估序号（0 为初始点）
        params: 变量取值（实际单位）
        objective: 目标函数值
        best: 截至此次的最优值
    """

    index: int
    params: tuple[float, ...]
    objective: float
    best: float


@dataclass(frozen=True)
class BoundedResult:
    x: np.ndarray
    fun: float
    evaluations: int
    trace: tuple[TraceEntry, ...]
    converged: bool
    message: str = ""


@dataclass(frozen=True)
class TuneResult:
    """调参结果

    Attributes:
        variables: 自由变量名
        initial: 初始取值
        tuned: 最优取值
        initial_objective: 初始点目标值
        objective: 最优目标值
        evaluations: 评估次数
        trace: 评估轨迹
        status: CONVERGED / NOT_CONVERGED
        message: 优化器信息
        tuned_config: 代入最优值后的方案配置
    """

    variables: tuple[str, ...]
    initial: dict[str, float]
    tuned: dict[str, float]
    initial_objective: float
    objective: float
    evaluations: int
    trace: tuple[TraceEntry, ...]
    status: TuneStatus
    message: str = ""
    tuned_config: Optional[Any] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.status is TuneStatus.CONVERGED

    def to_dict(self) -> dict[str, Any]:
        return {
            "variables": list(self.variables),
            "initial": self.initial,
            "tuned": self.tuned,
            "initial_objective": self.initial_objective,
            "objective": self.objective,
            "evaluations": self.evaluations,
            "status": self.status.value,
            "message": self.message,
        }
