"""读出链：逐级累积传递矩阵，并把每个噪声通道单独传播到读出端"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..core.quadrature import IDENTITY, dagger, mix_loss, sandwich
from ..errors import InvalidParameterError
from ..interferometer.readout import (
    check_signal_projection,
    project,
    quadrature_variance,
    readout_vector,
    signal_power,
)
from ..interferometer.response import IfoResponse
from .models import COMPONENT_KEYS


@dataclass
class _Path:
    label: str
    transfer: np.ndarray
    spectrum: np.ndarray


class ReadoutChain:
    """从源到零差读出的线性链

    主场从参考点（干涉仪输入）出发，其贡献在参考点的正交基下按
    |w₁|²S₁₁ : |w₂|²S₂₂ 拆为反作用与散粒两部分；其余通道各自标注归类。

    Example:
        chain = ReadoutChain(omega, squeezed_spectrum(state))
        chain.add_loss(0.005, "external_loss")
        chain.mark_reference()
        chain.inject(lossy_ifo_in_out(ifo, omega, 0.005), "external_loss")
        parts = chain.readout(theta=0.0, sql=sql_psd(ifo, omega))
    """

    def __init__(self, omega: np.ndarray, source_spectrum: np.ndarray):
        self.omega = np.asarray(omega, dtype=float)
        n = self.omega.size
        self._source = np.broadcast_to(np.asarray(source_spectrum, dtype=complex), (n, 2, 2)).copy()
        self._main = np.broadcast_to(IDENTITY, (n, 2, 2)).copy()
        self._signal = np.zeros((n, 2), dtype=complex)
        self._paths: list[_Path] = []
        self.stages: list[str] = []

    def _record(self, stage: str) -> None:
        self.stages.append(stage)
        logger.trace("读出链阶段: {}", stage)

    # ---------- 构建 ----------

    def apply(self, transfer: np.ndarray, stage: str = "transfer") -> "ReadoutChain":
        """在链末端左乘传递矩阵，作用于主场、信号和全部已有通道"""
        t = np.asarray(transfer)
        self._main = t @ self._main
        self._signal = np.einsum("...ij,...j->...i", t, self._signal)
        for path in self._paths:
            path.transfer = t @ path.transfer
        self._record(stage)
        return self

    def add_channel(self, label: str, transfer: np.ndarray, spectrum: np.ndarray) -> "ReadoutChain":
        """在当前位置加入一个独立噪声源"""
        if label not in COMPONENT_KEYS:
            raise InvalidParameterError(f"未知的噪声分量: {label}")
        n = self.omega.size
        t = np.broadcast_to(np.asarray(transfer, dtype=complex), (n, 2, 2)).copy()
        s = np.broadcast_to(np.asarray(spectrum, dtype=complex), (n, 2, 2)).copy()
        self._paths.append(_Path(label, t, s))
        return self

    def add_noise(self, label: str, spectrum: np.ndarray) -> "ReadoutChain":
        """在当前位置直接叠加噪声谱"""
        return self.add_channel(label, IDENTITY, spectrum)

    def add_loss(self, eps, label: str, stage: str = "loss") -> "ReadoutChain":
        """功率损耗：已有内容乘 √(1−ε)，并加入归类为 label 的真空"""
        e = np.asarray(eps, dtype=float)
        if np.all(e == 0):
            return self
        scaled, channels = mix_loss(np.broadcast_to(IDENTITY, (self.omega.size, 2, 2)), e)
        self.apply(scaled, stage)
        for ch in channels:
            self.add_channel(label, ch.transfer, ch.spectrum)
        return self

    def mark_reference(self) -> "ReadoutChain":
        """把当前主场设为参考点：之后的拆分在此处的正交基下进行"""
        self._source = sandwich(self._main, self._source)
        self._main = np.broadcast_to(IDENTITY, self._main.shape).copy()
        self._record("reference")
        return self

    def inject(self, response: IfoResponse, loss_label: str) -> "ReadoutChain":
        """经过干涉仪：施加传递矩阵、加入信号与干涉仪损耗通道"""
        self.apply(response.transfer, "interferometer")
        self._signal = self._signal + response.signal
        for ch in response.channels:
            self.add_channel(loss_label, ch.transfer, ch.spectrum)
        return self

    # ---------- 读出 ----------

    @property
    def signal(self) -> np.ndarray:
        return self._signal

    def output_spectrum(self) -> np.ndarray:
        out = sandwich(self._main, self._source)
        for path in self._paths:
            out = out + sandwich(path.transfer, path.spectrum)
        return 0.5 * (out + dagger(out))

    def readout(
        self,
        theta,
        sql: np.ndarray,
        backaction_label: str = "quantum_backaction",
        jitter: float = 0.0,
    ) -> dict[str, np.ndarray]:
        """零差读出，返回按分量归类的应变噪声谱

        Args:
            theta: 零差角（标量或逐频率）
            sql: S_SQL(Ω)
            backaction_label: 主场 a₁ 份额的归类
            jitter: 本振角度均方根抖动，贡献计入 angle_error

        Raises:
            InvalidParameterError: 信号投影为零
        """
        n = self.omega.size
        theta = np.broadcast_to(np.asarray(theta, dtype=float), (n,))
        v = readout_vector(theta)
        power = signal_power(v, self._signal)
        check_signal_projection(power, self._signal)
        scale = np.asarray(sql) / power

        parts = {key: np.zeros(n) for key in COMPONENT_KEYS}

        w = project(v, self._main)
        main = np.clip(quadrature_variance(w, self._source), 0.0, None)
        d1 = np.abs(w[:, 0]) ** 2 * np.real(self._source[:, 0, 0])
        d2 = np.abs(w[:, 1]) ** 2 * np.real(self._source[:, 1, 1])
        den = d1 + d2
        share = np.divide(d1, den, out=np.zeros(n), where=den > 0)
        parts[backaction_label] += scale * main * share
        parts["quantum_shot"] += scale * main * (1.0 - share)

        for path in self._paths:
            wp = project(v, path.transfer)
            parts[path.label] += scale * np.clip(quadrature_variance(wp, path.spectrum), 0.0, None)

        if jitter > 0:
            v_perp = np.stack([np.cos(theta), -np.sin(theta)], axis=-1)
            orth = np.clip(quadrature_variance(v_perp, self.output_spectrum()), 0.0, None)
            parts["angle_error"] += scale * jitter**2 * orth

        return parts
