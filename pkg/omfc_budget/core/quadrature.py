"""双光子正交分量代数

约定：
    - 正交分量顺序 (a1, a2) = (振幅, 相位)，引力波信号在相位分量上
    - 真空单边功率谱为单位矩阵
    - 逐频率矩阵形状 (N, 2, 2)，与频率无关的矩阵形状 (2, 2)，二者可广播
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ..errors import InvalidParameterError
from .units import squeeze_factor_from_db

IDENTITY = np.eye(2, dtype=complex)

# 边带基 (a(+Ω), a†(-Ω)) 与正交基之间的变换
_SIDEBAND_BASIS = np.array([[1.0, 1.0j], [1.0, -1.0j]])
_SIDEBAND_BASIS_INV = np.linalg.inv(_SIDEBAND_BASIS)


@dataclass(frozen=True)
class SqueezedState:
    """压缩真空态

    Attributes:
        r: 压缩因子（e-fold），≥ 0
        angle: 压缩角 (rad)，0 表示相位分量被压缩
    """

    r: float = 0.0
    angle: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.r) or self.r < 0:
            raise InvalidParameterError(f"压缩因子必须 ≥ 0，当前 {self.r}", key="squeeze.r")
        if not np.isfinite(self.angle):
            raise InvalidParameterError("压缩角必须为有限值", key="squeeze.angle_rad")

    @classmethod
    def from_db(cls, level_db: float, angle: float = 0.0) -> "SqueezedState":
        return cls(r=squeeze_factor_from_db(level_db), angle=angle)

    @property
    def squeezed_variance(self) -> float:
        return float(np.exp(-2.0 * self.r))


@dataclass(frozen=True)
class NoiseChannel:
    """附加噪声通道：贡献 N·S·N†

    Attributes:
        transfer: 通道到输出的传递矩阵
        spectrum: 通道源的功率谱
        label: 噪声预算中的归类
    """

    transfer: np.ndarray
    spectrum: np.ndarray
    label: str = ""


ChannelLike = Union[NoiseChannel, Sequence[np.ndarray]]


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def vacuum(n: int | None = None) -> np.ndarray:
    """真空谱；给定 n 时返回 (n, 2, 2)"""
    if n is None:
        return IDENTITY.copy()
    return np.broadcast_to(IDENTITY, (n, 2, 2)).copy()


def rotation(angle) -> np.ndarray:
    """正交分量旋转 [[cos, −sin], [sin, cos]]，angle 可为数组"""
    a = np.asarray(angle, dtype=float)
    c, s = np.cos(a), np.sin(a)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def squeezed_spectrum(state: SqueezedState) -> np.ndarray:
    """S = R(angle)·diag(e^{2r}, e^{−2r})·R(angle)ᵀ"""
    if state.r < 0:
        raise InvalidParameterError("压缩因子必须 ≥ 0", key="squeeze.r")
    rot = rotation(state.angle)
    core = np.diag([np.exp(2.0 * state.r), np.exp(-2.0 * state.r)])
    return (rot @ core @ rot.T).astype(complex)


def sideband_matrix(p, q) -> np.ndarray:
    """由上下边带响应构造正交分量传递矩阵

    p 为上边带响应 r(+Ω)，q 为 conj(r(−Ω))。纯相位响应给出旋转
    (arg p − arg q)/2；p = q 时退化为 p·I。
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    diag = np.zeros(np.broadcast(p, q).shape + (2, 2), dtype=complex)
    diag[..., 0, 0] = p
    diag[..., 1, 1] = q
    return _SIDEBAND_BASIS_INV @ diag @ _SIDEBAND_BASIS


def sideband_response(response, omega) -> np.ndarray:
    """对边带响应函数 response(ω) 在 ±Ω 取值并转为正交传递矩阵"""
    w = np.asarray(omega, dtype=float)
    return sideband_matrix(response(w), np.conj(response(-w)))


def idle_port(p, q) -> np.ndarray:
    """与 sideband_matrix(p, q) 互补的真空入口，使 M M† + N N† = I

    |p| 或 |q| 超过 1（存在增益）时对应分量取 0。
    """
    lp = np.sqrt(np.clip(1.0 - np.abs(np.asarray(p)) ** 2, 0.0, None))
    lq = np.sqrt(np.clip(1.0 - np.abs(np.asarray(q)) ** 2, 0.0, None))
    return sideband_matrix(lp, lq)


def rotation_angle_of(p, q) -> np.ndarray:
    """sideband_matrix(p, q) 携带的正交旋转角 (arg p − arg q)/2"""
    return 0.5 * (np.angle(p) - np.angle(q))


def as_channel(channel: ChannelLike) -> NoiseChannel:
    if isinstance(channel, NoiseChannel):
        return channel
    transfer, spectrum = channel[0], channel[1]
    label = channel[2] if len(channel) > 2 else ""
    return NoiseChannel(np.asarray(transfer), np.asarray(spectrum), label)


def _leading_shape(*arrays: np.ndarray) -> tuple[int, ...]:
    try:
        return np.broadcast_shapes(*(a.shape[:-2] for a in arrays))
    except ValueError as exc:
        raise InvalidParameterError(f"频率网格不一致: {exc}") from exc


def sandwich(transfer: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    """T·S·T†"""
    transfer = np.asarray(transfer)
    spectrum = np.asarray(spectrum)
    _leading_shape(transfer, spectrum)
    return transfer @ spectrum @ dagger(transfer)


def propagate(
    s_in: np.ndarray,
    transfer: np.ndarray,
    extra_channels: Iterable[ChannelLike] = (),
) -> np.ndarray:
    """S_out = T S_in T† + Σ N_i S_i N_i†

    Raises:
        InvalidParameterError: 各操作数的频率维度无法对齐
    """
    channels = [as_channel(ch) for ch in extra_channels]
    arrays = [np.asarray(s_in), np.asarray(transfer)]
    for ch in channels:
        arrays.extend([np.asarray(ch.transfer), np.asarray(ch.spectrum)])
    _leading_shape(*arrays)

    out = sandwich(transfer, s_in)
    for ch in channels:
        out = out + sandwich(ch.transfer, ch.spectrum)
    # 去掉舍入带来的反厄米部分
    return 0.5 * (out + dagger(out))


def mix_loss(transfer: np.ndarray, eps) -> tuple[np.ndarray, list[NoiseChannel]]:
    """功率损耗 ε：信号传递乘 √(1−ε)，并附加耦合 √ε 的真空通道

    ε 可以是标量或与频率网格同长的数组。
    """
    e = np.asarray(eps, dtype=float)
    if np.any(~np.isfinite(e)) or np.any(e < 0) or np.any(e >= 1):
        raise InvalidParameterError(f"损耗必须位于 [0, 1)，当前 {eps}")
    scale = np.sqrt(1.0 - e)[..., None, None]
    scaled = scale * np.asarray(transfer)
    if np.all(e == 0):
        return scaled, []
    coupling = np.sqrt(e)[..., None, None] * IDENTITY
    return scaled, [NoiseChannel(coupling, vacuum(), "loss")]


def is_physical_spectrum(spectrum: np.ndarray, atol: float = 1e-12) -> bool:
    """厄米且半正定（特征值 ≥ −atol）"""
    s = np.asarray(spectrum)
    if not np.allclose(s, dagger(s), atol=atol, rtol=0):
        return False
    return bool(np.all(np.linalg.eigvalsh(s) >= -atol))
