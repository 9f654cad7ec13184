"""分析频率网格"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from ..constants import TWO_PI
from ..errors import InvalidParameterError


class Spacing(str, Enum):
    """网格间隔方式"""

    LINEAR = "linear"
    LOGARITHMIC = "logarithmic"


@dataclass(frozen=True)
class FrequencyGrid:
    """边带角频率 Ω（rad/s）的有序集合

    Attributes:
        points: 严格递增、全部为正的 Ω 数组
        spacing: 生成方式
        hz: 对应的频率 (Hz)；缺省时由 Ω/2π 得到
    """

    points: np.ndarray = field(repr=False)
    spacing: Spacing = Spacing.LOGARITHMIC
    hz: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise InvalidParameterError("频率网格至少需要 2 个点", key="grid.points")
        if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
            raise InvalidParameterError("频率网格的点必须为有限正数", key="grid.points")
        if np.any(np.diff(pts) <= 0):
            raise InvalidParameterError("频率网格必须严格递增", key="grid.points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

        hz = pts / TWO_PI if self.hz is None else np.array(self.hz, dtype=float)
        if hz.shape != pts.shape:
            raise InvalidParameterError("Hz 数组与 Ω 数组长度不一致", key="grid.points")
        hz.setflags(write=False)
        object.__setattr__(self, "hz", hz)

    def __len__(self) -> int:
        return int(self.points.size)

    @property
    def omega(self) -> np.ndarray:
        return self.points

    @property
    def frequencies_hz(self) -> np.ndarray:
        return self.hz

    def contains_hz(self, f_hz: float) -> bool:
        """f_hz 是否落在网格端点之间（含端点）"""
        f = self.frequencies_hz
        return bool(f[0] * (1 - 1e-12) <= f_hz <= f[-1] * (1 + 1e-12))

    def to_dict(self) -> dict[str, Any]:
        f = self.frequencies_hz
        return {
            "f_min_hz": float(f[0]),
            "f_max_hz": float(f[-1]),
            "points": len(self),
            "spacing": self.spacing.value,
        }


def make_frequency_grid(
    f_min: float,
    f_max: float,
    n: int,
    spacing: Spacing | str = Spacing.LOGARITHMIC,
) -> FrequencyGrid:
    """由 Hz 端点生成角频率网格（包含端点）

    Args:
        f_min: 最低频率 (Hz)
        f_max: 最高频率 (Hz)
        n: 点数，≥ 2
        spacing: linear 或 logarithmic

    Raises:
        InvalidParameterError: 端点非正、颠倒或点数不足
    """
    spacing = Spacing(spacing)
    if not (np.isfinite(f_min) and np.isfinite(f_max)) or f_min <= 0:
        raise InvalidParameterError(f"f_min 必须为正数，当前 {f_min}", key="grid.f_min_hz")
    if f_max <= f_min:
        raise InvalidParameterError(
            f"f_max ({f_max}) 必须大于 f_min ({f_min})", key="grid.f_max_hz"
        )
    if int(n) != n or n < 2:
        raise InvalidParameterError(f"点数必须为 ≥ 2 的整数，当前 {n}", key="grid.points")

    if spacing is Spacing.LINEAR:
        f = np.linspace(f_min, f_max, int(n))
    else:
        f = np.geomspace(f_min, f_max, int(n))
    # geomspace 的端点可能有末位误差
    f[0], f[-1] = f_min, f_max
    return FrequencyGrid(points=TWO_PI * f, spacing=spacing, hz=f)


def as_omega(omega: Any) -> np.ndarray:
    """把标量、数组或 FrequencyGrid 统一为一维 Ω 数组"""
    if isinstance(omega, FrequencyGrid):
        return omega.points
    return np.atleast_1d(np.asarray(omega, dtype=float))
