"""OMFC 参数与耦合速率"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..constants import TWO_PI
from ..errors import InvalidParameterError


class ConversionModel(str, Enum):
    """噪声预算中使用的转换模型

    UNITY: 理想转换器，传递矩阵为 I
    ADIABATIC: 绝热消去后的二端口散射，附带空闲端口
    EXACT: 含旋转误差 ε₁ 的精确转换率，附带空闲端口
    """

    UNITY = "unity"
    ADIABATIC = "adiabatic"
    EXACT = "exact"


@dataclass(frozen=True)
class OmfcParams:
    """光机频率转换器的物理参数（默认值为样例参数表上半部分）

    Attributes:
        mass: 振子质量 (kg)
        omega_m: 机械角频率 (rad/s)
        q_m: 机械品质因子
        length_a, length_c: 两个腔的腔长 (m)
        gamma_a, gamma_c: 腔半带宽 (rad/s)
        power_a, power_c: 腔内泵浦功率 (W)
        pump_wavelength: 泵浦波长 (m)
        temperature: 环境温度 (K)
        round_trip_loss: 单次往返功率损耗
        gamma_opt_override: 直接指定光学阻尼率 (rad/s)，跳过推导
    """

    mass: float = 1e-6
    omega_m: float = TWO_PI * 1e6
    q_m: float = 5e7
    length_a: float = 1.0
    length_c: float = 1.0
    gamma_a: float = 1.5e5
    gamma_c: float = 1.5e5
    power_a: float = 170.0
    power_c: float = 170.0
    pump_wavelength: float = 1064e-9
    temperature: float = 1.0
    round_trip_loss: float = 1e-5
    gamma_opt_override: Optional[float] = None

    def __post_init__(self) -> None:
        positive = (
            "mass", "omega_m", "q_m", "length_a", "length_c",
            "gamma_a", "gamma_c", "power_a", "power_c", "pump_wavelength",
        )
        for name in positive:
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidParameterError(f"必须为正数，当前 {value}", key=f"omfc.{name}")
        if not np.isfinite(self.temperature) or self.temperature < 0:
            raise InvalidParameterError(
                f"温度不能为负，当前 {self.temperature}", key="omfc.temperature"
            )
        if not 0 <= self.round_trip_loss < 1:
            raise InvalidParameterError(
                f"往返损耗必须位于 [0, 1)，当前 {self.round_trip_loss}", key="omfc.round_trip_loss"
            )
        if self.gamma_opt_override is not None and not self.gamma_opt_override > 0:
            raise InvalidParameterError(
                f"必须为正数，当前 {self.gamma_opt_override}", key="omfc.gamma_opt_override"
            )

    @property
    def gamma_m(self) -> float:
        """机械振幅阻尼率 ω_m/(2 Q_m)"""
        return self.omega_m / (2.0 * self.q_m)

    @property
    def gamma_mean(self) -> float:
        return 0.5 * (self.gamma_a + self.gamma_c)

    @property
    def length_mean(self) -> float:
        return 0.5 * (self.length_a + self.length_c)

    @property
    def resolved_sideband_ratio(self) -> float:
        """max(γ_a, γ_c)/ω_m，远小于 1 时 Stokes 边带被抑制"""
        return max(self.gamma_a, self.gamma_c) / self.omega_m

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class OmfcRates:
    """由参数推导的耦合速率

    Attributes:
        x_zpf: 机械基态位移 (m)
        g_a, g_c: 线性化耦合率 Ḡ (rad/s)
        gamma_opt_a, gamma_opt_c: 光学阻尼率 Ḡ²/γ (rad/s)
        photons_a, photons_c: 腔内泵浦光子数（override 时为 None）
        overridden: γ_opt 是否来自 override
    """

    x_zpf: float
    g_a: float
    g_c: float
    gamma_opt_a: float
    gamma_opt_c: float
    photons_a: Optional[float] = None
    photons_c: Optional[float] = None
    overridden: bool = False

    @property
    def gamma_opt(self) -> float:
        """两侧匹配时的公共光学阻尼率（不匹配时取平均）"""
        return 0.5 * (self.gamma_opt_a + self.gamma_opt_c)

    @property
    def gamma_total(self) -> float:
        return self.gamma_opt_a + self.gamma_opt_c

    @property
    def is_matched(self) -> bool:
        return bool(np.isclose(self.gamma_opt_a, self.gamma_opt_c, rtol=1e-9, atol=0.0))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
