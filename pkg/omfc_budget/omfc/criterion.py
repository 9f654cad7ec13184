"""热噪声可行性判据

T/Q_m ≪ ħ γ_opt S_ref/k_B，S_ref 对频率相关压缩取 e^{−2r}，对变分读出取 1。
"≪" 量化为比值阈值：≤ pass_ratio 为 PASS，≤ fail_ratio 为 MARGINAL，否则 FAIL。
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..constants import HBAR, K_B
from ..core.quadrature import SqueezedState
from ..errors import InvalidParameterError
from .models import OmfcParams, OmfcRates

# 常被引用的数量级上界（单位 K；频率相关压缩项需乘 γ_opt）
QUOTED_BOUND_FD_PER_GAMMA = 5e-13
QUOTED_BOUND_VARIATIONAL = 5e-6


class CriterionScheme(str, Enum):
    FD_SQUEEZING = "fd_squeezing"
    VARIATIONAL = "variational"


class Verdict(str, Enum):
    PASS = "PASS"
    MARGINAL = "MARGINAL"
    FAIL = "FAIL"


@dataclass(frozen=True)
class CriterionReport:
    """判据结果

    Attributes:
        scheme: 判据所针对的方案
        t_over_q: T_envir/Q_m (K)
        bound: ħ γ_opt S_ref/k_B (K)
        ratio: t_over_q/bound
        verdict: PASS / MARGINAL / FAIL
        s_ref: 参考输入谱
        quoted_bound: 常被引用的数量级上界 (K)
    """

    scheme: CriterionScheme
    t_over_q: float
    bound: float
    ratio: float
    verdict: Verdict
    s_ref: float
    quoted_bound: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme.value,
            "t_over_q_K": self.t_over_q,
            "bound_K": self.bound,
            "ratio": self.ratio,
            "verdict": self.verdict.value,
            "s_ref": self.s_ref,
            "quoted_bound_K": self.quoted_bound,
        }


def bound_coefficient(s_ref: float) -> float:
    """ħ·S_ref/k_B (s·K)，乘以 γ_opt 即得上界"""
    return HBAR * s_ref / K_B


def classify(ratio: float, pass_ratio: float = 0.1, fail_ratio: float = 1.0) -> Verdict:
    if ratio <= pass_ratio:
        return Verdict.PASS
    if ratio <= fail_ratio:
        return Verdict.MARGINAL
    return Verdict.FAIL


def thermal_criterion(
    p: OmfcParams,
    r: OmfcRates,
    scheme: CriterionScheme | str,
    squeeze: SqueezedState | None = None,
    pass_ratio: float = 0.1,
    fail_ratio: float = 1.0,
) -> CriterionReport:
    """计算热噪声判据

    Args:
        scheme: fd_squeezing 需要给出 squeeze；variational 忽略 squeeze
        pass_ratio, fail_ratio: 判定阈值
    """
    scheme = CriterionScheme(scheme)
    if not 0 < pass_ratio <= fail_ratio:
        raise InvalidParameterError("阈值须满足 0 < pass_ratio ≤ fail_ratio", key="criterion.pass_ratio")

    if scheme is CriterionScheme.FD_SQUEEZING:
        if squeeze is None:
            raise InvalidParameterError("频率相关压缩判据需要输入压缩态", key="squeeze.level_db")
        s_ref = float(np.exp(-2.0 * squeeze.r))
        quoted = QUOTED_BOUND_FD_PER_GAMMA * r.gamma_opt
    else:
        s_ref = 1.0
        quoted = QUOTED_BOUND_VARIATIONAL

    t_over_q = p.temperature / p.q_m
    bound = bound_coefficient(s_ref) * r.gamma_opt
    ratio = t_over_q / bound
    return CriterionReport(
        scheme=scheme,
        t_over_q=t_over_q,
        bound=bound,
        ratio=ratio,
        verdict=classify(ratio, pass_ratio, fail_ratio),
        s_ref=s_ref,
        quoted_bound=quoted,
    )
