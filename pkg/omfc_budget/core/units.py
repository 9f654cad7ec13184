"""dB 换算"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidParameterError


def db(variance):
    """方差 → dB，10·log10(variance)"""
    v = np.asarray(variance, dtype=float)
    if np.any(~(v > 0)):
        raise InvalidParameterError("dB 换算要求方差为正数")
    out = 10.0 * np.log10(v)
    return float(out) if out.ndim == 0 else out


def from_db(level_db):
    """dB → 方差，db 的逆运算"""
    out = np.power(10.0, np.asarray(level_db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def squeeze_factor_from_db(level_db: float) -> float:
    """压缩 x dB 对应的压缩因子 r（压缩正交分量方差 e^{-2r} = 10^{-x/10}）"""
    if level_db < 0:
        raise InvalidParameterError(f"压缩量不能为负: {level_db} dB", key="squeeze.level_db")
    return float(level_db) * np.log(10.0) / 20.0


def squeeze_db_from_factor(r: float) -> float:
    return float(r) * 20.0 / np.log(10.0)
