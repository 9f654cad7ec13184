"""方案注册表"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, Type

import numpy as np
from loguru import logger

from ..errors import InvalidParameterError
from .base import BaseScheme
from .models import SchemeConfig, SchemeMode


class SchemeRegistry:
    """按 SchemeMode 查找方案实现

    Example:
        @SchemeRegistry.register(SchemeMode.VARIATIONAL_READOUT)
        class VariationalReadoutScheme(BaseScheme):
            ...

        scheme = SchemeRegistry.get_or_raise(cfg.mode)
        budget = scheme.budget(cfg, grid)
    """

    _schemes: dict[SchemeMode, Type[BaseScheme]] = {}
    _instances: dict[SchemeMode, BaseScheme] = {}

    @classmethod
    def register(cls, *modes: SchemeMode) -> Callable[[Type[BaseScheme]], Type[BaseScheme]]:
        """注册方案的装饰器，一个实现可以承担多个模式"""

        def decorator(scheme_cls: Type[BaseScheme]) -> Type[BaseScheme]:
            for mode in modes:
                if mode in cls._schemes:
                    logger.warning(
                        "方案 {} 已注册，将被覆盖: {} -> {}",
                        mode.value,
                        cls._schemes[mode].__name__,
                        scheme_cls.__name__,
                    )
                cls._schemes[mode] = scheme_cls
                cls._instances.pop(mode, None)
                logger.debug("已注册方案: {} -> {}", mode.value, scheme_cls.__name__)
            return scheme_cls

        return decorator

    @classmethod
    def get_or_raise(cls, mode: SchemeMode | str) -> BaseScheme:
        """获取方案实例（同一实现类共享实例）

        Raises:
            InvalidParameterError: 模式未知或未注册
        """
        try:
            mode = SchemeMode(mode)
        except ValueError:
            raise InvalidParameterError(
                f"未知方案 '{mode}'，可用方案: {', '.join(cls.list_schemes()) or '(无)'}",
                key="scheme.mode",
            ) from None

        if mode in cls._instances:
            return cls._instances[mode]
        scheme_cls = cls._schemes.get(mode)
        if scheme_cls is None:
            raise InvalidParameterError(
                f"方案 '{mode.value}' 未注册，可用方案: {', '.join(cls.list_schemes()) or '(无)'}",
                key="scheme.mode",
            )
        instance = scheme_cls()
        cls._instances[mode] = instance
        return instance

    @classmethod
    def list_schemes(cls) -> list[str]:
        return [mode.value for mode in cls._schemes]

    @classmethod
    def is_registered(cls, mode: SchemeMode | str) -> bool:
        try:
            return SchemeMode(mode) in cls._schemes
        except ValueError:
            return False


def baseline_total(cfg: SchemeConfig, omega: np.ndarray) -> np.ndarray:
    """同一配置下无 OMFC、真空输入的总噪声"""
    base_cfg = replace(cfg, mode=SchemeMode.BASELINE_VACUUM)
    return SchemeRegistry.get_or_raise(SchemeMode.BASELINE_VACUUM).total(base_cfg, omega)
