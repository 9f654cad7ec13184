"""OMFC 散射模型

三个精度层级：
    - full_three_mode_solve: 不做绝热消去的三模 (a, c, b) 线性系统
    - adiabatic_in_out: 消去腔模后的二端口散射矩阵
    - ideal_conversion: Ω ≪ γ_opt 的近似

以及计入反旋波项的精确转换率 exact_conversion_rate 和它的一阶展开。
频域约定 d/dt → −iΩ。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..core.grid import as_omega
from ..core.quadrature import IDENTITY, idle_port, sideband_matrix
from ..errors import InvalidParameterError, SingularSystemError
from .models import ConversionModel, OmfcParams, OmfcRates

# 系数矩阵条件数上限，超过即视为奇异
COND_LIMIT = 1e12


def _denominator(r: OmfcRates, omega: np.ndarray) -> np.ndarray:
    return r.gamma_total - 1j * omega


def adiabatic_in_out(r: OmfcRates, omega) -> np.ndarray:
    """二端口场散射矩阵，(c_in, a_in) → (c_out, a_out)，形状 (N, 2, 2)

    c_out = [(γ_opta − γ_optc − iΩ) c_in + 2√(γ_opta γ_optc) a_in]/(γ_opta + γ_optc − iΩ)
    a_out 对称。
    """
    w = as_omega(omega)
    if r.gamma_total <= 0:
        raise InvalidParameterError("γ_opta + γ_optc 必须为正")
    den = _denominator(r, w)
    swap = 2.0 * np.sqrt(r.gamma_opt_a * r.gamma_opt_c) / den
    out = np.empty(w.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = (r.gamma_opt_a - r.gamma_opt_c - 1j * w) / den
    out[..., 0, 1] = swap
    out[..., 1, 0] = swap
    out[..., 1, 1] = (r.gamma_opt_c - r.gamma_opt_a - 1j * w) / den
    return out


def adiabatic_conversion_rate(r: OmfcRates, omega) -> np.ndarray:
    """a_in → c_out 的转换系数（adiabatic_in_out 的非对角元）"""
    w = as_omega(omega)
    return 2.0 * np.sqrt(r.gamma_opt_a * r.gamma_opt_c) / _denominator(r, w)


def ideal_conversion(r: OmfcRates, omega) -> np.ndarray:
    """[[−iΩ/2γ_opt, 1], [1, −iΩ/2γ_opt]]，仅适用于匹配速率且 Ω ≪ γ_opt"""
    if not r.is_matched:
        raise InvalidParameterError(
            f"理想转换要求 γ_opta = γ_optc，当前 {r.gamma_opt_a:.4e} / {r.gamma_opt_c:.4e}"
        )
    w = as_omega(omega)
    diag = -1j * w / (2.0 * r.gamma_opt)
    out = np.empty(w.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = diag
    out[..., 0, 1] = 1.0
    out[..., 1, 0] = 1.0
    out[..., 1, 1] = diag
    return out


def thermal_channel(r: OmfcRates, gamma_m: float, omega) -> tuple[np.ndarray, np.ndarray]:
    """热浴 b_th 进入 (c_out, a_out) 的系数

    c: 2i√(γ_m γ_optc)/(γ_opta + γ_optc − iΩ)
    a: −2i√(γ_m γ_opta)/(γ_opta + γ_optc − iΩ)
    """
    if gamma_m < 0:
        raise InvalidParameterError(f"γ_m 不能为负，当前 {gamma_m}", key="omfc.gamma_m")
    w = as_omega(omega)
    den = _denominator(r, w)
    c_coeff = 2j * np.sqrt(gamma_m * r.gamma_opt_c) / den
    a_coeff = -2j * np.sqrt(gamma_m * r.gamma_opt_a) / den
    return c_coeff, a_coeff


# ---------- 三模精确求解 ----------


@dataclass(frozen=True)
class ThreeModeScattering:
    """(a_in, c_in, b_th) → (a_out, c_out, b 反射) 的 3×3 散射矩阵

    Attributes:
        omega: 频率点 (rad/s)
        matrix: 形状 (N, 3, 3)
    """

    omega: np.ndarray
    matrix: np.ndarray

    def optical_ports(self) -> np.ndarray:
        """按 adiabatic_in_out 的顺序 (c, a) 取出光学端口子块"""
        order = [1, 0]
        return self.matrix[..., order, :][..., :, order]

    def conversion_rate(self) -> np.ndarray:
        """a_in → c_out"""
        return self.matrix[..., 1, 0]


def full_three_mode_solve(p: OmfcParams, r: OmfcRates, omega) -> ThreeModeScattering:
    """直接求解线性化朗之万方程，不做绝热消去

    ȧ = −γ_a a − iḠ_a b + √(2γ_a) a_in
    ċ = −γ_c c + iḠ_c b + √(2γ_c) c_in
    ḃ = −γ_m b − iḠ_a a + iḠ_c c + √(2γ_m) b_th
    输出 x_out = √(2γ_x) x − x_in。

    Raises:
        SingularSystemError: 某个频率点系数矩阵奇异
    """
    w = as_omega(omega)
    return _solve_three_mode(p.gamma_a, p.gamma_c, p.gamma_m, r.g_a, r.g_c, w, w.size)


def _solve_three_mode(
    gamma_a: float,
    gamma_c: float,
    gamma_m: float,
    g_a: float,
    g_c: float,
    w: np.ndarray,
    n: int,
) -> ThreeModeScattering:
    a_mat = np.zeros((n, 3, 3), dtype=complex)
    a_mat[:, 0, 0] = gamma_a - 1j * w
    a_mat[:, 0, 2] = 1j * g_a
    a_mat[:, 1, 1] = gamma_c - 1j * w
    a_mat[:, 1, 2] = -1j * g_c
    a_mat[:, 2, 0] = 1j * g_a
    a_mat[:, 2, 1] = -1j * g_c
    a_mat[:, 2, 2] = gamma_m - 1j * w

    b_vec = np.sqrt(2.0 * np.array([gamma_a, gamma_c, gamma_m]))
    b_mat = np.diag(b_vec).astype(complex)

    cond = np.linalg.cond(a_mat)
    bad = ~np.isfinite(cond) | (cond > COND_LIMIT)
    if np.any(bad):
        idx = int(np.argmax(bad))
        logger.error("三模方程组病态，Ω = {:.6e} rad/s，条件数 {:.3e}", w[idx], cond[idx])
        raise SingularSystemError(float(w[idx]), f"条件数 {cond[idx]:.3e} 超过 {COND_LIMIT:.0e}")

    try:
        inner = np.linalg.solve(a_mat, np.broadcast_to(b_mat, (n, 3, 3)))
    except np.linalg.LinAlgError:
        det = np.abs(np.linalg.det(a_mat))
        idx = int(np.argmin(det))
        logger.error("三模方程组奇异，Ω = {:.6e} rad/s", w[idx])
        raise SingularSystemError(float(w[idx])) from None

    matrix = b_mat @ inner - np.eye(3)
    if not np.all(np.isfinite(matrix)):
        idx = int(np.argmax(~np.all(np.isfinite(matrix), axis=(-2, -1))))
        raise SingularSystemError(float(w[idx]), "解中出现非有限值")
    return ThreeModeScattering(omega=w, matrix=matrix)


def three_mode_without_damping(p: OmfcParams, r: OmfcRates, omega) -> ThreeModeScattering:
    """γ_m = 0 的三模解，用于绝热消去的有效性比较"""
    w = as_omega(omega)
    return _solve_three_mode(p.gamma_a, p.gamma_c, 0.0, r.g_a, r.g_c, w, w.size)


# ---------- 精确转换率 ----------


def small_parameters(p: OmfcParams, omega) -> tuple[float, np.ndarray, np.ndarray]:
    """(ε₁, ε₂, ε₃) = (γ/2ω_m, Ω/2ω_m, Ω/γ)，γ 取两腔平均半带宽"""
    w = as_omega(omega)
    gamma = p.gamma_mean
    return gamma / (2.0 * p.omega_m), w / (2.0 * p.omega_m), w / gamma


def _require_matched(r: OmfcRates) -> None:
    if not r.is_matched:
        raise InvalidParameterError(
            f"精确转换率要求 γ_opta = γ_optc，当前 {r.gamma_opt_a:.4e} / {r.gamma_opt_c:.4e}"
        )


def exact_conversion_rate(p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """ĉ_out/â_in，计入反旋波项

    γ_opt(1+ε₂+iε₁)/(1−iε₃)² / [−iΩ(1+ε₂+iε₁) + γ_opt/(1−iε₃)]
    """
    _require_matched(r)
    w = as_omega(omega)
    e1, e2, e3 = small_parameters(p, w)
    g = r.gamma_opt
    u = 1.0 + e2 + 1j * e1
    v = 1.0 / (1.0 - 1j * e3)
    return g * u * v**2 / (-1j * w * u + g * v)


def conversion_rate_leading_order(p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """exact_conversion_rate 在 γ_opt/(γ_opt − iΩ) 附近对 ε₁, ε₂, ε₃ 的一阶展开"""
    _require_matched(r)
    w = as_omega(omega)
    e1, e2, e3 = small_parameters(p, w)
    g = r.gamma_opt
    base = g - 1j * w
    bracket = (
        1.0
        + e2
        + 1j * e1
        + 2j * e3
        + (1j * w * (e2 + 1j * e1) - 1j * g * e3) / base
    )
    return g / base * bracket


def conversion_rotation(p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """精确转换在正交分量上引入的旋转 (arg t(Ω) + arg t(−Ω))/2，低频极限为 ε₁"""
    w = as_omega(omega)
    return 0.5 * (np.angle(exact_conversion_rate(p, r, w)) + np.angle(exact_conversion_rate(p, r, -w)))


def conversion_transfer(
    model: ConversionModel | str,
    p: OmfcParams,
    r: OmfcRates,
    omega,
) -> tuple[np.ndarray, np.ndarray | None]:
    """噪声预算使用的正交传递矩阵与空闲端口

    Returns:
        (transfer, idle)；UNITY 模型的 idle 为 None
    """
    model = ConversionModel(model)
    w = as_omega(omega)
    if model is ConversionModel.UNITY:
        return np.broadcast_to(IDENTITY, w.shape + (2, 2)).copy(), None

    if model is ConversionModel.ADIABATIC:
        plus = adiabatic_conversion_rate(r, w)
        minus = adiabatic_conversion_rate(r, -w)
    else:
        plus = exact_conversion_rate(p, r, w)
        minus = exact_conversion_rate(p, r, -w)

    p_side, q_side = plus, np.conj(minus)
    return sideband_matrix(p_side, q_side), idle_port(p_side, q_side)


def conversion_phase_error(model: ConversionModel | str, p: OmfcParams, r: OmfcRates, omega) -> np.ndarray:
    """转换模型引入的正交旋转；只有 EXACT 非零"""
    w = as_omega(omega)
    if ConversionModel(model) is ConversionModel.EXACT:
        return conversion_rotation(p, r, w)
    return np.zeros_like(w)
