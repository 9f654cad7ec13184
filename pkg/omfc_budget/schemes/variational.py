"""OMFC 辅助的变分读出方案

干涉仪输出场（载波 ω₀）直接由 OMFC 转换到另一载波，再送回失谐干涉仪
获得频率相关旋转，最后在固定的直流零差角 θ_dc 读出。理想情况下
总旋转 = arctan κ，辐射压噪声被完全规避；旋转残差 δθ 以 angle_error 出现。

链路顺序：
    输入 → 干涉仪（提取端 ε_circ）→ OMFC → ε_circ → 滤波旋转 → ε_ext → 零差 θ_dc
"""

from __future__ import annotations

import numpy as np

from ..core.grid import FrequencyGrid
from ..interferometer.filter import filter_transfer
from ..interferometer.response import lossy_ifo_in_out, sql_psd
from .base import BaseScheme
from .chain import ReadoutChain
from .models import InputField, NoiseBudget, SchemeConfig, SchemeMode
from .registry import SchemeRegistry


@SchemeRegistry.register(SchemeMode.VARIATIONAL_READOUT)
class VariationalReadoutScheme(BaseScheme):
    """OMFC 辅助变分读出，规避辐射压噪声"""

    modes = (SchemeMode.VARIATIONAL_READOUT,)

    def evaluate(self, cfg: SchemeConfig, omega: np.ndarray) -> dict[str, np.ndarray]:
        ifo = cfg.ifo
        squeezed = cfg.variational_input is InputField.SQUEEZED
        chain = ReadoutChain(omega, self.source_spectrum(cfg, squeezed=squeezed))
        if squeezed:
            chain.add_loss(ifo.circ_loss, "external_loss", stage="injection")
        chain.mark_reference()
        chain.inject(lossy_ifo_in_out(ifo, omega, ifo.circ_loss), "external_loss")
        self.apply_omfc(chain, cfg, omega)
        chain.add_loss(ifo.circ_loss, "external_loss", stage="circulator")
        chain.apply(filter_transfer(cfg.filter, ifo, omega), "filter")
        chain.add_loss(ifo.ext_loss, "external_loss", stage="readout")
        return chain.readout(
            cfg.theta_dc,
            sql_psd(ifo, omega),
            backaction_label="angle_error",
            jitter=cfg.angle_jitter,
        )


def variational_readout_budget(cfg: SchemeConfig, grid: FrequencyGrid) -> NoiseBudget:
    """变分读出方案的噪声预算

    Raises:
        InvalidParameterError: cfg.mode 不是 variational_readout
    """
    return SchemeRegistry.get_or_raise(SchemeMode.VARIATIONAL_READOUT).budget(cfg, grid)
