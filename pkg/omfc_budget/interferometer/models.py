"""主干涉仪与滤波腔参数"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..constants import C, TWO_PI
from ..errors import InvalidParameterError
from .calibration import calibrate_gamma_ifo, ponderomotive_constant

DEFAULT_KAPPA_SQ_TARGET = 4.5e4
DEFAULT_KAPPA_CALIBRATION_HZ = 3.1


@dataclass(frozen=True)
class IfoParams:
    """主干涉仪参数（默认值为样例参数表下半部分）

    Attributes:
        mass: 测试质量 (kg)
        arm_length: 臂长 (m)
        arm_power: 臂腔循环功率 I_c (W)
        omega_0: 载波角频率 (rad/s)
        gamma_ifo: 有效探测器半带宽 (rad/s)；None 时按默认 κ² 目标标定
        t_itm, t_srm: 输入测试质量与信号循环镜的功率透射率
        circ_loss: 环行器单程损耗
        ext_loss: 外部损耗
        frequency_offset: OMFC 两载波频差 (rad/s)，仅作记录
    """

    mass: float = 40.0
    arm_length: float = 4000.0
    arm_power: float = 8e5
    omega_0: float = TWO_PI * C / 1064e-9
    gamma_ifo: Optional[float] = None
    t_itm: float = 0.014
    t_srm: float = 0.35
    circ_loss: float = 0.005
    ext_loss: float = 0.005
    frequency_offset: float = TWO_PI * 15e6

    def __post_init__(self) -> None:
        for name in ("mass", "arm_length", "arm_power", "omega_0"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidParameterError(f"必须为正数，当前 {value}", key=f"ifo.{name}")
        for name in ("t_itm", "t_srm", "circ_loss", "ext_loss"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise InvalidParameterError(f"必须位于 [0, 1)，当前 {value}", key=f"ifo.{name}")
        if self.gamma_ifo is None:
            gamma = calibrate_gamma_ifo(self.k0, DEFAULT_KAPPA_SQ_TARGET, DEFAULT_KAPPA_CALIBRATION_HZ)
            object.__setattr__(self, "gamma_ifo", gamma)
        elif not self.gamma_ifo > 0:
            raise InvalidParameterError(f"必须为正数，当前 {self.gamma_ifo}", key="ifo.gamma_ifo")

    @property
    def k0(self) -> float:
        """16 ω₀ I_c/(M L_arm c)"""
        return ponderomotive_constant(self.omega_0, self.arm_power, self.mass, self.arm_length)

    @property
    def k_prime(self) -> float:
        """低频极限 κ ≈ K′/Ω² 中的 K′"""
        return self.k0 / self.gamma_ifo

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class FilterMode(str, Enum):
    """滤波旋转的来源

    MATCHED: 失谐腔，Δ_f = γ_f = √(K′/2)
    PERFECT: 逐频率精确旋转 arctan κ
    EXPLICIT: 给定 (Δ_f, γ_f) 的失谐腔
    """

    MATCHED = "matched"
    PERFECT = "perfect"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class FilterParams:
    """等效失谐滤波腔

    Attributes:
        detuning: Δ_f (rad/s)
        bandwidth: γ_f (rad/s)，> 0
    """

    detuning: float
    bandwidth: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.detuning):
            raise InvalidParameterError("失谐必须为有限值", key="filter.detuning_hz")
        if not np.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise InvalidParameterError(
                f"滤波腔带宽必须为正，当前 {self.bandwidth}", key="filter.bandwidth_hz"
            )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FilterSpec:
    """滤波设置：模式 + 失谐腔参数（PERFECT 时 params 为 None）"""

    mode: FilterMode
    params: Optional[FilterParams] = None

    def __post_init__(self) -> None:
        if self.mode is not FilterMode.PERFECT and self.params is None:
            raise InvalidParameterError(f"{self.mode.value} 模式需要失谐腔参数", key="filter.mode")

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "detuning": None if self.params is None else self.params.detuning,
            "bandwidth": None if self.params is None else self.params.bandwidth,
        }
