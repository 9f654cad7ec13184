"""方案基类"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np
from loguru import logger

from ..core.grid import FrequencyGrid, as_omega
from ..core.quadrature import IDENTITY, squeezed_spectrum, vacuum
from ..errors import InvalidParameterError
from ..interferometer.response import sql_psd
from ..omfc.imperfections import effective_loss, thermal_noise_spectrum
from ..omfc.scattering import conversion_transfer
from .chain import ReadoutChain
from .models import COMPONENT_KEYS, NoiseBudget, SchemeConfig, SchemeMode


class BaseScheme(ABC):
    """探测器方案抽象基类

    子类声明 modes 并实现 evaluate，返回按 COMPONENT_KEYS 归类的应变噪声。

    Example:
        @SchemeRegistry.register(SchemeMode.FD_SQUEEZING)
        class FdSqueezingScheme(BaseScheme):
            modes = (SchemeMode.FD_SQUEEZING,)

            def evaluate(self, cfg, omega):
                chain = ReadoutChain(omega, squeezed_spectrum(cfg.input_squeeze))
                ...
                return chain.readout(theta, sql_psd(cfg.ifo, omega))
    """

    modes: tuple[SchemeMode, ...] = ()

    @property
    def scheme_id(self) -> str:
        return self.modes[0].value

    @property
    def description(self) -> str:
        return (self.__doc__ or "").strip().splitlines()[0]

    def check_mode(self, cfg: SchemeConfig) -> None:
        if cfg.mode not in self.modes:
            allowed = ", ".join(m.value for m in self.modes)
            raise InvalidParameterError(
                f"方案 {self.scheme_id} 不接受模式 {cfg.mode.value}（可用: {allowed}）",
                key="scheme.mode",
            )

    @abstractmethod
    def evaluate(self, cfg: SchemeConfig, omega: np.ndarray) -> dict[str, np.ndarray]:
        """逐频率计算各噪声分量 (1/Hz)"""

    def components(self, cfg: SchemeConfig, omega) -> dict[str, np.ndarray]:
        self.check_mode(cfg)
        return self.evaluate(cfg, as_omega(omega))

    def total(self, cfg: SchemeConfig, omega) -> np.ndarray:
        parts = self.components(cfg, omega)
        return sum((parts[key] for key in COMPONENT_KEYS), np.zeros(as_omega(omega).size))

    def budget(self, cfg: SchemeConfig, grid: FrequencyGrid) -> NoiseBudget:
        """组装完整噪声预算，附带 SQL 与无 OMFC 的基线"""
        from .registry import baseline_total

        omega = grid.omega
        parts = self.components(cfg, omega)
        references = {
            "sql": sql_psd(cfg.ifo, omega),
            "baseline": baseline_total(cfg, omega),
        }
        logger.debug("已组装噪声预算: {} ({} 点)", self.scheme_id, len(grid))
        return NoiseBudget(
            grid=grid,
            components=parts,
            references=references,
            metadata=self.metadata(cfg),
        )

    def metadata(self, cfg: SchemeConfig) -> dict[str, Any]:
        rates = cfg.rates
        return {
            "scheme": cfg.mode.value,
            "conversion_model": cfg.conversion_model.value,
            "filter_mode": cfg.filter.mode.value,
            "gamma_opt_rad_s": rates.gamma_opt,
            "gamma_opt_overridden": rates.overridden,
            "gamma_ifo_rad_s": cfg.ifo.gamma_ifo,
        }

    # ---------- 共用阶段 ----------

    @staticmethod
    def source_spectrum(cfg: SchemeConfig, squeezed: bool) -> np.ndarray:
        return squeezed_spectrum(cfg.input_squeeze) if squeezed else vacuum()

    @staticmethod
    def omfc_loss(cfg: SchemeConfig, omega: np.ndarray) -> np.ndarray:
        if cfg.omfc_loss_override is not None:
            return np.full(omega.shape, float(cfg.omfc_loss_override))
        return effective_loss(cfg.omfc, cfg.rates, omega)

    def apply_omfc(self, chain: ReadoutChain, cfg: SchemeConfig, omega: np.ndarray) -> None:
        """转换（含空闲端口）→ 有效损耗 → 热噪声"""
        rates = cfg.rates
        transfer, idle = conversion_transfer(cfg.conversion_model, cfg.omfc, rates, omega)
        chain.apply(transfer, "omfc")
        if idle is not None:
            chain.add_channel("omfc_loss", idle, vacuum())
        chain.add_loss(self.omfc_loss(cfg, omega), "omfc_loss", stage="omfc_loss")
        s_th = thermal_noise_spectrum(cfg.omfc, rates, omega)
        chain.add_noise("omfc_thermal", s_th[:, None, None] * IDENTITY)
