"""异常定义

每个异常带有 exit_code，由 CLI 统一映射为进程退出码：
    2 - 配置/参数校验失败
    3 - 数值失败（奇异方程组、无实根等）
    4 - 调参未收敛
"""

from __future__ import annotations

from typing import Any, Optional


class OmfcBudgetError(Exception):
    """所有本项目异常的基类"""

    exit_code: int = 1


class InvalidParameterError(OmfcBudgetError, ValueError):
    """输入参数不合法

    Attributes:
        key: 出错的参数名（点分路径），未知时为 None
    """

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class ConfigError(InvalidParameterError):
    """配置文档校验失败或包含未知键"""


class NumericalError(OmfcBudgetError, ArithmeticError):
    """数值计算失败"""

    exit_code = 3


class SingularSystemError(NumericalError):
    """三模线性方程组在某个频率点奇异"""

    def __init__(self, omega: float, message: str = ""):
        self.omega = omega
        detail = f" ({message})" if message else ""
        super().__init__(f"三模方程组奇异: Ω = {omega:.6e} rad/s{detail}")


class NotConvergedError(OmfcBudgetError):
    """调参在评估次数耗尽前未收敛

    Attributes:
        result: 已求得的最优结果（best-so-far）
    """

    exit_code = 4

    def __init__(self, result: Any, message: str = "调参未收敛"):
        self.result = result
        super().__init__(message)
