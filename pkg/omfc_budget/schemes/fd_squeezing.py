"""频率相关压缩方案

压缩光先经失谐干涉仪（作为滤波腔）获得频率相关的压缩角，
再由 OMFC 转换到主干涉仪载波频率注入，最后在固定正交分量读出。

链路顺序：
    源 → 环行器 ε_circ → 滤波旋转 → OMFC → 干涉仪（提取端 ε_circ）→ ε_ext → 零差 θ

第一次经过干涉仪时远失谐，不携带引力波信号、也不推动测试质量，
因此只体现为滤波旋转。
"""

from __future__ import annotations

import numpy as np

from ..core.grid import FrequencyGrid
from ..interferometer.filter import filter_transfer
from ..interferometer.response import lossy_ifo_in_out, sql_psd
from .base import BaseScheme
from .chain import ReadoutChain
from .models import NoiseBudget, SchemeConfig, SchemeMode
from .registry import SchemeRegistry


@SchemeRegistry.register(SchemeMode.FD_SQUEEZING)
class FdSqueezingScheme(BaseScheme):
    """OMFC 辅助的宽带频率相关压缩"""

    modes = (SchemeMode.FD_SQUEEZING,)

    def evaluate(self, cfg: SchemeConfig, omega: np.ndarray) -> dict[str, np.ndarray]:
        ifo = cfg.ifo
        chain = ReadoutChain(omega, self.source_spectrum(cfg, squeezed=True))
        chain.add_loss(ifo.circ_loss, "external_loss", stage="injection")
        chain.apply(filter_transfer(cfg.filter, ifo, omega), "filter")
        self.apply_omfc(chain, cfg, omega)
        chain.mark_reference()
        chain.inject(lossy_ifo_in_out(ifo, omega, ifo.circ_loss), "external_loss")
        chain.add_loss(ifo.ext_loss, "external_loss", stage="readout")
        return chain.readout(
            cfg.readout.fixed_angle,
            sql_psd(ifo, omega),
            backaction_label="quantum_backaction",
            jitter=cfg.angle_jitter,
        )


def fd_squeezing_budget(cfg: SchemeConfig, grid: FrequencyGrid) -> NoiseBudget:
    """频率相关压缩方案的噪声预算

    Raises:
        InvalidParameterError: cfg.mode 不是 fd_squeezing
    """
    return SchemeRegistry.get_or_raise(SchemeMode.FD_SQUEEZING).budget(cfg, grid)
