"""CLI 子命令

每个 build_* 函数由解析后的配置生成一张表；cmd_* 负责读取参数、写文件并返回退出码。
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from loguru import logger

from .. import __version__
from ..config import RunConfig, ResolvedRun, load_config, resolve_run, resolve_tune_spec
from ..errors import ConfigError, NotConvergedError
from ..omfc.criterion import CriterionScheme, thermal_criterion
from ..omfc.imperfections import converted_squeeze_level, effective_loss, thermal_noise_spectrum
from ..omfc.models import ConversionModel
from ..omfc.scattering import adiabatic_conversion_rate, exact_conversion_rate
from ..schemes import compute_budget
from ..tuning import TuneResult, degradation_at, optimize
from .output import write_table

SENSITIVITY_COMPONENTS = ("quantum_shot", "quantum_backaction")
SWEEP_TABLES = ("convert", "sensitivity")

_VARIABLE_UNITS = {"detuning": "rad_s", "bandwidth": "rad_s", "theta_dc": "rad"}


# ---------- 配置 ----------


def _grid_overrides(run: RunConfig, args: argparse.Namespace) -> RunConfig:
    """命令行参数覆盖配置文档中的对应字段"""
    overrides = (
        ("grid.f_min_hz", args.fmin),
        ("grid.f_max_hz", args.fmax),
        ("grid.points", args.points),
        ("scheme.mode", args.scheme),
    )
    for key, value in overrides:
        if value is not None:
            run = run.with_override(key, value)
    return run


def load_run(args: argparse.Namespace) -> RunConfig:
    return _grid_overrides(load_config(args.config), args)


def output_meta(command: str, resolved: ResolvedRun, **extra: Any) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "version": __version__,
        "command": command,
        "scheme": resolved.scheme.mode.value,
    }
    meta.update(resolved.metadata)
    meta.update(extra)
    return meta


def _out_path(args: argparse.Namespace) -> Optional[Path]:
    return Path(args.out) if args.out else None


# ---------- 表格 ----------


def build_convert_table(resolved: ResolvedRun) -> pd.DataFrame:
    """转换率、有效损耗、热噪声与转换后压缩度随频率的变化"""
    cfg = resolved.scheme
    p, r = cfg.omfc, cfg.rates
    omega = resolved.grid.omega

    if cfg.conversion_model is ConversionModel.UNITY:
        t = np.ones(omega.size, dtype=complex)
    elif cfg.conversion_model is ConversionModel.ADIABATIC:
        t = adiabatic_conversion_rate(r, omega)
    else:
        t = exact_conversion_rate(p, r, omega)

    if cfg.omfc_loss_override is not None:
        eps = np.full(omega.size, cfg.omfc_loss_override)
    else:
        eps = effective_loss(p, r, omega)

    return pd.DataFrame(
        {
            "frequency_Hz": resolved.grid.frequencies_hz,
            "conversion_abs": np.abs(t),
            "conversion_arg_rad": np.angle(t),
            "eps_omfc": eps,
            "S_th_vacuum_units": thermal_noise_spectrum(p, r, omega),
            "squeeze_dB": converted_squeeze_level(p, r, cfg.input_squeeze, omega),
        }
    )


def build_sensitivity_table(resolved: ResolvedRun, all_components: bool = False) -> pd.DataFrame:
    budget = compute_budget(resolved.scheme, resolved.grid)
    if all_components:
        return budget.to_frame()
    return budget.to_frame(components=SENSITIVITY_COMPONENTS)


def build_criterion_table(resolved: ResolvedRun) -> pd.DataFrame:
    """两种方案的热噪声判据，每行一个方案"""
    cfg = resolved.scheme
    thresholds = resolved.config.criterion
    rows = []
    for scheme in CriterionScheme:
        report = thermal_criterion(
            cfg.omfc,
            cfg.rates,
            scheme,
            squeeze=cfg.input_squeeze,
            pass_ratio=thresholds.pass_ratio,
            fail_ratio=thresholds.fail_ratio,
        )
        logger.info(
            "{}: T/Q_m = {:.3e} K, 上界 {:.3e} K (常见估计 {:.1e} K), 比值 {:.3f} → {}",
            scheme.value,
            report.t_over_q,
            report.bound,
            report.quoted_bound,
            report.ratio,
            report.verdict.value,
        )
        rows.append(report.to_dict())
    return pd.DataFrame(rows)


def build_tune_tables(resolved: ResolvedRun) -> tuple[TuneResult, pd.DataFrame, pd.DataFrame]:
    """运行调参，返回 (结果, 汇总表, 轨迹表)"""
    cfg = resolved.scheme
    tune = resolved.config.tune
    spec = resolve_tune_spec(tune, cfg)
    result = optimize(cfg, spec, resolved.grid)

    before = degradation_at(cfg, tune.f_ref_hz, resolved.grid)
    after = degradation_at(result.tuned_config, tune.f_ref_hz, resolved.grid)
    logger.info("{} Hz 处灵敏度退化: {:.4f} dB → {:.4f} dB", tune.f_ref_hz, before, after)

    summary: dict[str, Any] = {
        "objective": spec.objective.value,
        "initial_objective": result.initial_objective,
        "tuned_objective": result.objective,
        "degradation_before_dB": before,
        "degradation_after_dB": after,
        "evaluations": result.evaluations,
        "status": result.status.value,
    }
    for name in result.variables:
        unit = _VARIABLE_UNITS[name]
        summary[f"{name}_initial_{unit}"] = result.initial[name]
        summary[f"{name}_tuned_{unit}"] = result.tuned[name]

    trace_rows = []
    for entry in result.trace:
        row: dict[str, Any] = {"eval_index": entry.index}
        for name, value in zip(result.variables, entry.params):
            row[f"{name}_{_VARIABLE_UNITS[name]}"] = value
        row["objective"] = entry.objective
        row["best_objective"] = entry.best
        trace_rows.append(row)

    return result, pd.DataFrame([summary]), pd.DataFrame(trace_rows)


def parse_sweep_values(raw: str) -> list[Any]:
    """逗号分隔的取值，每项按 JSON 解析（失败时保留字符串）"""
    values: list[Any] = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    if not values:
        raise ConfigError("至少需要一个取值", key="sweep.values")
    return values


def build_sweep_table(run: RunConfig, param: str, values: list[Any], table: str) -> pd.DataFrame:
    """对一个标量参数逐值计算并纵向拼接，首列为 sweep_value"""
    if table not in SWEEP_TABLES:
        raise ConfigError(f"未知表格 {table}，可选 {list(SWEEP_TABLES)}", key="sweep.table")
    frames = []
    for value in values:
        resolved = resolve_run(run.with_override(param, value))
        frame = build_convert_table(resolved) if table == "convert" else build_sensitivity_table(resolved)
        frame.insert(0, "sweep_value", value)
        frames.append(frame)
        logger.debug("扫描 {} = {} 完成", param, value)
    return pd.concat(frames, ignore_index=True)


# ---------- 子命令 ----------


def cmd_convert(args: argparse.Namespace) -> int:
    resolved = resolve_run(load_run(args))
    frame = build_convert_table(resolved)
    write_table(frame, resolved.config, output_meta("convert", resolved), _out_path(args))
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    resolved = resolve_run(load_run(args))
    frame = build_sensitivity_table(resolved)
    write_table(frame, resolved.config, output_meta("sensitivity", resolved), _out_path(args))
    return 0


def cmd_budget(args: argparse.Namespace) -> int:
    resolved = resolve_run(load_run(args))
    frame = build_sensitivity_table(resolved, all_components=True)
    write_table(frame, resolved.config, output_meta("budget", resolved), _out_path(args))
    return 0


def cmd_criterion(args: argparse.Namespace) -> int:
    resolved = resolve_run(load_run(args))
    frame = build_criterion_table(resolved)
    write_table(frame, resolved.config, output_meta("criterion", resolved), _out_path(args))
    return 0


def cmd_tune(args: argparse.Namespace) -> int:
    """写出汇总表与轨迹；未收敛时在写完后抛出 NotConvergedError"""
    resolved = resolve_run(load_run(args))
    result, summary, trace = build_tune_tables(resolved)
    meta = output_meta("tune", resolved, free_variables=list(result.variables))

    out = _out_path(args)
    write_table(summary, resolved.config, meta, out)

    trace_path = Path(args.trace) if args.trace else None
    if trace_path is None and out is not None:
        trace_path = out.with_name(f"{out.stem}_trace.csv")
    if trace_path is not None:
        write_table(trace, resolved.config, {**meta, "command": "tune.trace"}, trace_path)

    if not result.converged:
        raise NotConvergedError(result, f"调参未收敛: {result.message}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    run = load_run(args)
    values = parse_sweep_values(args.values)
    frame = build_sweep_table(run, args.param, values, args.table)
    resolved = resolve_run(run)
    meta = output_meta(
        "sweep",
        resolved,
        sweep_param=args.param,
        sweep_values=values,
        sweep_table=args.table,
    )
    write_table(frame, run, meta, _out_path(args))
    return 0
