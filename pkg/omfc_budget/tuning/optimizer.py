"""有界无导数优化：粗扫描 + Nelder-Mead 精化

变量先归一化到 [0, 1]，粗扫描选出起点，再用 scipy 的有界 Nelder-Mead 精化。
评估次数达到上限时提前停止并返回目前的最优点。
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from ..core.grid import FrequencyGrid
from ..errors import InvalidParameterError
from ..schemes import SchemeConfig
from .models import BoundedResult, TraceEntry, TuneResult, TuneSpec, TuneStatus
from .objective import apply_values, current_values, objective_value


class _EvaluationBudgetExhausted(Exception):
    pass


def _initial_simplex(start: np.ndarray, step: float) -> np.ndarray:
    """以 start 为首顶点、沿各轴偏移 step 的单纯形（越界时反向）"""
    simplex = np.tile(start, (start.size + 1, 1))
    for i in range(start.size):
        delta = step if start[i] + step <= 1.0 else -step
        simplex[i + 1, i] += delta
    return simplex


def minimize_bounded(
    func: Callable[[np.ndarray], float],
    x0: Sequence[float],
    bounds: Sequence[tuple[float, float]],
    *,
    max_evals: int = 400,
    xatol: float = 1e-4,
    fatol: float = 1e-4,
    scan_points: int = 5,
    simplex_step: float = 0.1,
) -> BoundedResult:
    """在盒约束内最小化 func

    Args:
        func: 目标函数，接受实际单位的变量向量
        x0: 初始点（先被评估，作为第 0 条轨迹）
        bounds: 每个变量的 (lower, upper)
        max_evals: 评估次数上限
        xatol: 归一化变量的收敛容差
        fatol: 目标函数收敛容差
        scan_points: 粗扫描每维点数（1 表示跳过扫描）
        simplex_step: 初始单纯形边长（归一化单位）

    Returns:
        BoundedResult，fun 不大于初始点的目标值
    """
    x0 = np.asarray(x0, dtype=float)
    lower = np.array([b[0] for b in bounds], dtype=float)
    upper = np.array([b[1] for b in bounds], dtype=float)
    if x0.shape != lower.shape:
        raise InvalidParameterError(f"x0 维度 {x0.shape} 与边界数 {lower.size} 不一致", key="tune.variables")
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper)) and np.all(lower < upper)):
        raise InvalidParameterError("边界必须有限且 lower < upper", key="tune.variables")
    if np.any(x0 < lower) or np.any(x0 > upper):
        raise InvalidParameterError(f"初始点 {x0.tolist()} 不在边界内", key="tune.variables")

    span = upper - lower
    trace: list[TraceEntry] = []
    best_x = x0.copy()
    best_f = np.inf

    def evaluate_actual(x: np.ndarray) -> float:
        nonlocal best_x, best_f
        if len(trace) >= max_evals:
            raise _EvaluationBudgetExhausted
        value = float(func(x))
        if not np.isfinite(value):
            value = np.inf
        if value < best_f or not trace:
            best_x, best_f = x.copy(), value
        trace.append(TraceEntry(index=len(trace), params=tuple(float(v) for v in x), objective=value, best=best_f))
        return value

    def evaluate_unit(u: np.ndarray) -> float:
        return evaluate_actual(lower + np.clip(u, 0.0, 1.0) * span)

    converged = False
    message = ""
    try:
        evaluate_actual(x0)
        if scan_points > 1:
            axis = np.linspace(0.0, 1.0, scan_points)
            for point in itertools.product(axis, repeat=x0.size):
                evaluate_unit(np.array(point))
            logger.debug("粗扫描完成: {} 次评估, 最优 {:.6g}", len(trace), best_f)

        remaining = max_evals - len(trace)
        if remaining <= 0:
            raise _EvaluationBudgetExhausted
        start = (best_x - lower) / span
        res = minimize(
            evaluate_unit,
            start,
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * x0.size,
            options={
                "initial_simplex": _initial_simplex(start, simplex_step),
                "maxfev": remaining,
                "xatol": xatol,
                "fatol": fatol,
            },
        )
        converged = bool(res.success)
        message = str(res.message)
    except _EvaluationBudgetExhausted:
        message = f"评估次数达到上限 {max_evals}"

    return BoundedResult(
        x=best_x,
        fun=best_f,
        evaluations=len(trace),
        trace=tuple(trace),
        converged=converged,
        message=message,
    )


def optimize(cfg: SchemeConfig, spec: TuneSpec, grid: Optional[FrequencyGrid] = None) -> TuneResult:
    """调节 TuneSpec 中的自由变量，使目标函数最小

    Raises:
        InvalidParameterError: 边界非法、初始值越界或参考频率不在网格内
    """
    if grid is not None:
        spec.check_grid(grid)
    names = spec.names
    initial = current_values(cfg, names)
    x0 = np.array([initial[name] for name in names])

    def func(x: np.ndarray) -> float:
        return objective_value(apply_values(cfg, dict(zip(names, x))), spec)

    logger.info("开始调参: 方案 {} 目标 {} 变量 {}", cfg.mode.value, spec.objective.value, names)
    result = minimize_bounded(
        func,
        x0,
        spec.bounds,
        max_evals=spec.max_evals,
        xatol=spec.x_tolerance,
        fatol=spec.tolerance,
        scan_points=spec.scan_points,
    )
    tuned = {name: float(v) for name, v in zip(names, result.x)}
    status = TuneStatus.CONVERGED if result.converged else TuneStatus.NOT_CONVERGED
    if result.converged:
        logger.info("调参收敛: {} 次评估, 目标 {:.6g} -> {:.6g}", result.evaluations, result.trace[0].objective, result.fun)
    else:
        logger.warning("调参未收敛: {}", result.message)

    return TuneResult(
        variables=tuple(names),
        initial=initial,
        tuned=tuned,
        initial_objective=result.trace[0].objective,
        objective=result.fun,
        evaluations=result.evaluations,
        trace=result.trace,
        status=status,
        message=result.message,
        tuned_config=apply_values(cfg, tuned),
    )
