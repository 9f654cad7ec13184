"""无 OMFC 的参考方案：真空输入或固定正交分量压缩"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..core.grid import FrequencyGrid
from ..interferometer.response import lossy_ifo_in_out, sql_psd, variational_angle
from .base import BaseScheme
from .chain import ReadoutChain
from .models import NoiseBudget, ReadoutKind, SchemeConfig, SchemeMode
from .registry import SchemeRegistry


@SchemeRegistry.register(SchemeMode.BASELINE_VACUUM, SchemeMode.BASELINE_FIXED_SQUEEZE)
class BaselineScheme(BaseScheme):
    """常规干涉仪参考曲线"""

    modes = (SchemeMode.BASELINE_VACUUM, SchemeMode.BASELINE_FIXED_SQUEEZE)

    def evaluate(self, cfg: SchemeConfig, omega: np.ndarray) -> dict[str, np.ndarray]:
        ifo = cfg.ifo
        squeezed = cfg.mode is SchemeMode.BASELINE_FIXED_SQUEEZE
        chain = ReadoutChain(omega, self.source_spectrum(cfg, squeezed=squeezed))
        if squeezed:
            chain.add_loss(ifo.circ_loss, "external_loss", stage="injection")
        chain.mark_reference()
        chain.inject(lossy_ifo_in_out(ifo, omega, ifo.circ_loss), "external_loss")
        chain.add_loss(ifo.ext_loss, "external_loss", stage="readout")

        if cfg.readout.kind is ReadoutKind.VARIATIONAL:
            theta = variational_angle(ifo, omega) + cfg.theta_dc
            label = "angle_error"
        else:
            theta = cfg.readout.angle
            label = "quantum_backaction"
        return chain.readout(theta, sql_psd(ifo, omega), backaction_label=label, jitter=cfg.angle_jitter)


def baseline_budget(cfg: SchemeConfig, grid: FrequencyGrid) -> NoiseBudget:
    """参考预算；cfg.mode 不是基线模式时按真空输入计算"""
    if cfg.mode not in BaselineScheme.modes:
        cfg = replace(cfg, mode=SchemeMode.BASELINE_VACUUM)
    return SchemeRegistry.get_or_raise(cfg.mode).budget(cfg, grid)
